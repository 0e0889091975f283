#pragma once

// Pointwise differential geometry of a graph (x, y) -> (x, y, f, g) in flat
// C^2 = R^4. Everything here is templated on the scalar so the same algebra
// runs on doubles and on Eigen::AutoDiffScalar (used to differentiate the
// Kahler angle exactly along analytic surfaces).

#include <Eigen/Core>

#include <cmath>

namespace bsc {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

/// Two-jet of the height functions at one point.
template <typename Scalar>
struct Jet {
  Scalar f{0}, g{0};
  Scalar fx{0}, fy{0}, gx{0}, gy{0};
  Scalar fxx{0}, fxy{0}, fyy{0};
  Scalar gxx{0}, gxy{0}, gyy{0};

  Scalar a() const { return fy + gx; }
  Scalar b() const { return fx - gy; }
  Scalar c() const { return Scalar(1) + fx * gy - fy * gx; }
};

/// Induced metric g_ij and its inverse g^ij.
template <typename Scalar>
struct FirstFundamental {
  Scalar g11, g12, g22;
  Scalar det;
  Scalar gi11, gi12, gi22;
};

template <typename Scalar>
FirstFundamental<Scalar> first_fundamental(const Jet<Scalar>& jet) {
  FirstFundamental<Scalar> m;
  m.g11 = Scalar(1) + jet.fx * jet.fx + jet.gx * jet.gx;
  m.g22 = Scalar(1) + jet.fy * jet.fy + jet.gy * jet.gy;
  m.g12 = jet.fx * jet.fy + jet.gx * jet.gy;
  m.det = m.g11 * m.g22 - m.g12 * m.g12;
  m.gi11 = m.g22 / m.det;
  m.gi12 = -m.g12 / m.det;
  m.gi22 = m.g11 / m.det;
  return m;
}

/// det g through the Kahler decomposition a^2 + b^2 + c^2.
template <typename Scalar>
Scalar kahler_det(const Jet<Scalar>& jet) {
  const Scalar a = jet.a(), b = jet.b(), c = jet.c();
  return a * a + b * b + c * c;
}

template <typename Scalar>
struct KahlerData {
  Scalar cos_alpha;
  Scalar sin2_alpha;

  bool symplectic() const { return cos_alpha > Scalar(0); }
};

/// omega restricted to the surface equals cos(alpha) times the area form.
template <typename Scalar>
KahlerData<Scalar> kahler_angle(const Jet<Scalar>& jet, const FirstFundamental<Scalar>& fund) {
  using std::sqrt;
  const Scalar a = jet.a(), b = jet.b();
  return {jet.c() / sqrt(fund.det), (a * a + b * b) / fund.det};
}

/// Complex structure of C^2 in coordinates (x, y, u3, u4):
/// J dx = dy, J dy = -dx, J d3 = d4, J d4 = -d3.
template <typename Derived>
Vector4<typename Derived::Scalar> apply_J(const Eigen::MatrixBase<Derived>& v) {
  return {-v(1), v(0), -v(3), v(2)};
}

template <typename Scalar>
struct ExtrinsicData {
  Vector4<Scalar> e1, e2;  // coordinate tangent vectors dF/dx, dF/dy
  Vector4<Scalar> n3, n4;  // orthonormal normal frame
  Scalar h3_11, h3_12, h3_22;
  Scalar h4_11, h4_12, h4_22;
  Vector4<Scalar> H;
  Scalar normA2;
  Scalar K;

  Scalar normH2() const { return H.squaredNorm(); }
};

/// Orthogonal projection onto span(e1, e2) using the inverse metric.
template <typename Scalar>
Vector4<Scalar> tangent_part(const Vector4<Scalar>& v, const Vector4<Scalar>& e1,
                             const Vector4<Scalar>& e2, const FirstFundamental<Scalar>& m) {
  const Scalar p1 = v.dot(e1), p2 = v.dot(e2);
  return (m.gi11 * p1 + m.gi12 * p2) * e1 + (m.gi12 * p1 + m.gi22 * p2) * e2;
}

template <typename Scalar>
ExtrinsicData<Scalar> extrinsic_data(const Jet<Scalar>& jet, const FirstFundamental<Scalar>& m) {
  ExtrinsicData<Scalar> x;
  const Scalar zero(0), one(1);
  x.e1 << one, zero, jet.fx, jet.gx;
  x.e2 << zero, one, jet.fy, jet.gy;

  // Gram-Schmidt of E3 then E4 against the tangent plane.
  Vector4<Scalar> E3, E4;
  E3 << zero, zero, one, zero;
  E4 << zero, zero, zero, one;
  Vector4<Scalar> v3 = E3 - tangent_part(E3, x.e1, x.e2, m);
  x.n3 = v3 / v3.norm();
  Vector4<Scalar> v4 = E4 - tangent_part(E4, x.e1, x.e2, m);
  v4 -= v4.dot(x.n3) * x.n3;
  x.n4 = v4 / v4.norm();

  // <F_ij, n> with F_ij = (0, 0, f_ij, g_ij).
  auto h = [&](const Vector4<Scalar>& n, const Scalar& fij, const Scalar& gij) {
    return fij * n(2) + gij * n(3);
  };
  x.h3_11 = h(x.n3, jet.fxx, jet.gxx);
  x.h3_12 = h(x.n3, jet.fxy, jet.gxy);
  x.h3_22 = h(x.n3, jet.fyy, jet.gyy);
  x.h4_11 = h(x.n4, jet.fxx, jet.gxx);
  x.h4_12 = h(x.n4, jet.fxy, jet.gxy);
  x.h4_22 = h(x.n4, jet.fyy, jet.gyy);

  auto trace = [&](const Scalar& h11, const Scalar& h12, const Scalar& h22) {
    return m.gi11 * h11 + Scalar(2) * m.gi12 * h12 + m.gi22 * h22;
  };
  // |h|^2_g = tr(G^-1 h G^-1 h)
  auto norm2 = [&](const Scalar& h11, const Scalar& h12, const Scalar& h22) {
    const Scalar m11 = m.gi11 * h11 + m.gi12 * h12;
    const Scalar m12 = m.gi11 * h12 + m.gi12 * h22;
    const Scalar m21 = m.gi12 * h11 + m.gi22 * h12;
    const Scalar m22 = m.gi12 * h12 + m.gi22 * h22;
    return m11 * m11 + Scalar(2) * m12 * m21 + m22 * m22;
  };
  const Scalar H3 = trace(x.h3_11, x.h3_12, x.h3_22);
  const Scalar H4 = trace(x.h4_11, x.h4_12, x.h4_22);
  x.H = H3 * x.n3 + H4 * x.n4;
  x.normA2 = norm2(x.h3_11, x.h3_12, x.h3_22) + norm2(x.h4_11, x.h4_12, x.h4_22);
  // Gauss equation in flat ambient space.
  x.K = Scalar(0.5) * (H3 * H3 + H4 * H4 - x.normA2);
  return x;
}

}  // namespace bsc
