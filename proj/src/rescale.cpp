#include "bsc/rescale.hpp"

#include "bsc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace bsc {

MaxCurvature find_max_A(const SurfaceFields& fields) {
  const GridSpec& G = fields.grid();
  MaxCurvature best;
  best.lambda = -1.0;
  for (int i = 1; i < G.nx - 1; ++i)
    for (int j = 1; j < G.ny - 1; ++j) {
      const double a = fields.at(i, j).normA();
      if (a > best.lambda) best = {i, j, a};
    }
  return best;
}

RescaleSpec make_rescale_spec(const SurfaceFields& fields, int i, int j, int n, double half_width) {
  const GridSpec& G = fields.grid();
  if (!G.contains(i, j)) throw ContractError(ContractError::Kind::OutOfRange, "rescale centre outside grid");
  const auto& node = fields.at(i, j);
  RescaleSpec s;
  s.ci = i;
  s.cj = j;
  s.lambda = node.normA();
  s.t1 = node.ext.e1.normalized();
  s.t2 = (node.ext.e2 - node.ext.e2.dot(s.t1) * s.t1).normalized();
  s.output = GridSpec::over(-half_width, half_width, -half_width, half_width, n, n);
  return s;
}

namespace {

// Unit vector orthogonal to every column of `basis`, from the coordinate axes.
Vec4 complete(const std::vector<Vec4>& basis) {
  Vec4 best = Vec4::Zero();
  for (int k = 0; k < 4; ++k) {
    Vec4 v = Vec4::Unit(k);
    for (const Vec4& b : basis) v -= v.dot(b) * b;
    if (v.norm() > best.norm()) best = v;
  }
  return best.normalized();
}

}  // namespace

AmbientRotation blowup_rotation(const RescaleSpec& spec) {
  AmbientRotation rot;
  const Vec4 e = spec.t1, Je = apply_J(spec.t1);
  const double cos_alpha = Je.dot(spec.t2);
  if (cos_alpha > 0.0) {
    Vec4 nu = spec.t2 - spec.t2.dot(Je) * Je - spec.t2.dot(e) * e;
    nu = nu.norm() > 1e-12 ? Vec4(nu.normalized()) : complete({e, Je});
    rot.R.row(0) = e.transpose();
    rot.R.row(1) = Je.transpose();
    rot.R.row(2) = nu.transpose();
    rot.R.row(3) = apply_J(nu).transpose();
    rot.unitary = true;
  } else {
    const Vec4 n3 = complete({spec.t1, spec.t2});
    const Vec4 n4 = complete({spec.t1, spec.t2, n3});
    rot.R.row(0) = spec.t1.transpose();
    rot.R.row(1) = spec.t2.transpose();
    rot.R.row(2) = n3.transpose();
    rot.R.row(3) = n4.transpose();
    rot.unitary = false;
  }
  return rot;
}

namespace {

constexpr double kKeysA = -0.5;

double keys(double d) {
  const double s = std::abs(d);
  if (s <= 1.0) return (kKeysA + 2) * s * s * s - (kKeysA + 3) * s * s + 1;
  if (s < 2.0) return kKeysA * s * s * s - 5 * kKeysA * s * s + 8 * kKeysA * s - 4 * kKeysA;
  return 0.0;
}

double keys_prime(double d) {
  const double s = std::abs(d), sg = d < 0 ? -1.0 : 1.0;
  if (s <= 1.0) return sg * (3 * (kKeysA + 2) * s * s - 2 * (kKeysA + 3) * s);
  if (s < 2.0) return sg * (3 * kKeysA * s * s - 10 * kKeysA * s + 8 * kKeysA);
  return 0.0;
}

}  // namespace

bool bicubic(const GridSpec& grid, const Field& v, double x, double y, Interpolated& out) {
  const double px = (x - grid.x0) / grid.hx, py = (y - grid.y0) / grid.hy;
  if (!std::isfinite(px) || !std::isfinite(py)) return false;
  const int kx = static_cast<int>(std::floor(px)), ky = static_cast<int>(std::floor(py));
  if (kx - 1 < 0 || ky - 1 < 0 || kx + 2 > grid.nx - 1 || ky + 2 > grid.ny - 1) return false;
  const double tx = px - kx, ty = py - ky;
  double wx[4], wy[4], dwx[4], dwy[4];
  for (int m = 0; m < 4; ++m) {
    const double dx = tx - (m - 1), dy = ty - (m - 1);
    wx[m] = keys(dx);
    wy[m] = keys(dy);
    dwx[m] = keys_prime(dx) / grid.hx;
    dwy[m] = keys_prime(dy) / grid.hy;
  }
  out = {};
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      const double val = v(kx - 1 + a, ky - 1 + b);
      out.value += wx[a] * wy[b] * val;
      out.dx += dwx[a] * wy[b] * val;
      out.dy += wx[a] * dwy[b] * val;
    }
  return true;
}

RescaleOutcome rescale_to_graph(const GraphPatch& patch, const RescaleSpec& spec) {
  using K = ContractError::Kind;
  const GridSpec& G = patch.grid();
  // |A| of a plane comes out as roundoff, not 0; compare with the patch size
  const double extent = std::max(G.x_max() - G.x0, G.y_max() - G.y0);
  if (!(spec.lambda * extent > 1e-10))
    throw ContractError(K::DegenerateRescale, "rescaling needs lambda > 0 (flat patch?)");
  if (!G.contains(spec.ci, spec.cj)) throw ContractError(K::OutOfRange, "rescale centre outside grid");
  spec.output.validate();

  const AmbientRotation rot = blowup_rotation(spec);
  const Vec4 Fc = patch.point(spec.ci, spec.cj);
  const double lam = spec.lambda;
  const Eigen::Matrix<double, 2, 4> R12 = rot.R.topRows<2>();

  // linearisation at the centre gives the starting guess
  Eigen::Matrix<double, 4, 2> T;
  T.col(0) = spec.t1;
  T.col(1) = spec.t2;
  const Eigen::Matrix2d M0 = lam * R12 * T;
  const double det0 = M0.determinant();
  if (std::abs(det0) < 1e-12 * lam * lam)
    throw ContractError(K::InterpolationDegenerate, "tangent plane does not project onto the window");
  Eigen::Matrix<double, 4, 2> Tc;  // coordinate tangent vectors at the centre
  {
    const double x = G.x(spec.ci), y = G.y(spec.cj);
    Interpolated f, g;
    if (!bicubic(G, patch.f(), x, y, f) || !bicubic(G, patch.g(), x, y, g)) {
      f = {patch.f()(spec.ci, spec.cj), 0, 0};
      g = {patch.g()(spec.ci, spec.cj), 0, 0};
    }
    Tc << 1, 0, 0, 1, f.dx, f.dy, g.dx, g.dy;
  }
  const Eigen::Matrix2d Mc = lam * R12 * Tc;
  const double sign0 = Mc.determinant() > 0 ? 1.0 : -1.0;
  const Eigen::Matrix2d Mc_inv = Mc.inverse();

  const GridSpec& O = spec.output;
  Field fo(O.nx, O.ny), go(O.nx, O.ny);
  for (int j = 0; j < O.ny; ++j)
    for (int i = 0; i < O.nx; ++i) {
      const Eigen::Vector2d target(O.x(i), O.y(j));
      Eigen::Vector2d p = Eigen::Vector2d(G.x(spec.ci), G.y(spec.cj)) + Mc_inv * target;
      bool done = false;
      Vec4 P = Vec4::Zero();
      for (int it = 0; it < 50; ++it) {
        Interpolated f, g;
        if (!bicubic(G, patch.f(), p(0), p(1), f) || !bicubic(G, patch.g(), p(0), p(1), g))
          throw ContractError(K::WindowEscapesPatch,
                              "rescaled window maps outside the original patch");
        const Vec4 F(p(0), p(1), f.value, g.value);
        P = lam * rot.R * (F - Fc);
        Eigen::Matrix<double, 4, 2> dF;
        dF << 1, 0, 0, 1, f.dx, f.dy, g.dx, g.dy;
        const Eigen::Matrix2d Jm = lam * R12 * dF;
        if (Jm.determinant() * sign0 <= 1e-12 * lam * lam)
          throw ContractError(K::InterpolationDegenerate, "projection is not injective over the window");
        const Eigen::Vector2d res = P.head<2>() - target;
        if (res.norm() <= 1e-13 * (1.0 + target.norm())) {
          done = true;
          break;
        }
        p -= Jm.inverse() * res;
      }
      if (!done) throw ContractError(K::InterpolationDegenerate, "graph inversion did not converge");
      fo(i, j) = P(2);
      go(i, j) = P(3);
    }
  return {GraphPatch(O, std::move(fo), std::move(go)), !rot.unitary};
}

double holomorphy_deficit(const SurfaceFields& fields) {
  const GridSpec& G = fields.grid();
  double d = 0.0;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) d = std::max(d, fields.at(i, j).kahler.sin2_alpha);
  return d;
}

}  // namespace bsc
