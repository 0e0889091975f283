#include "doctest.h"
#include "support.hpp"

#include "bsc/rescale.hpp"

#include <Eigen/Dense>

using namespace bsc;
using bsc::testing::square;

namespace {

// |A|^2 of the holomorphic graph w = z^2: 4 |w''|^2 / (1 + |w'|^2)^3.
double z2_normA2(double x, double y) {
  const double r2 = x * x + y * y;
  return 16.0 / std::pow(1 + 4 * r2, 3);
}

}  // namespace

TEST_CASE("maximum of |A|") {
  const MaxCurvature flat = find_max_A(SurfaceFields(surfaces::affine(0, 0, 0, 0).sample(square(-1, 1, 9))));
  CHECK(flat.i == 1);
  CHECK(flat.j == 1);
  CHECK(flat.lambda == 0.0);

  const GridSpec G = square(-1, 1, 33);
  const MaxCurvature z2 = find_max_A(SurfaceFields(surfaces::holomorphic_z2().sample(G)));
  int bi = 1, bj = 1;
  for (int i = 1; i < G.nx - 1; ++i)
    for (int j = 1; j < G.ny - 1; ++j)
      if (z2_normA2(G.x(i), G.y(j)) > z2_normA2(G.x(bi), G.y(bj))) bi = i, bj = j;
  CHECK(z2.i == bi);
  CHECK(z2.j == bj);
  CHECK(z2.lambda * z2.lambda == doctest::Approx(z2_normA2(G.x(bi), G.y(bj))).epsilon(1e-10));

  // bump: dense scan of the exact jets at the nodes
  const AnalyticSurface bump = surfaces::bump(0.2, 0.4);
  const MaxCurvature mb = find_max_A(SurfaceFields(bump.sample(G)));
  double best = -1;
  for (int i = 1; i < G.nx - 1; ++i)
    for (int j = 1; j < G.ny - 1; ++j) {
      const Jet<double> e = bump.jet(G.x(i), G.y(j));
      const double a2 = extrinsic_data(e, first_fundamental(e)).normA2;
      if (a2 > best) best = a2, bi = i, bj = j;
    }
  CHECK(mb.i == bi);
  CHECK(mb.j == bj);
}

TEST_CASE("rescale spec") {
  const SurfaceFields F(bsc::testing::twisted_shear().sample(square(-1, 1, 17)));
  const RescaleSpec s = make_rescale_spec(F, 5, 9, 17, 0.5);
  CHECK(s.lambda > 0.0);
  Eigen::Matrix2d gram;
  gram << s.t1.dot(s.t1), s.t1.dot(s.t2), s.t2.dot(s.t1), s.t2.dot(s.t2);
  CHECK((gram - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s.output.nx == 17);
  CHECK(s.output.x0 == doctest::Approx(-0.5));
  const AmbientRotation R = blowup_rotation(s);
  CHECK(R.unitary);
  CHECK((R.R * R.R.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(1, 0) = 1, J(0, 1) = -1, J(3, 2) = 1, J(2, 3) = -1;
  CHECK((R.R * J - J * R.R).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("affine patches cannot be rescaled") {
  const GraphPatch p = surfaces::affine(0.3, 0.1, 0.0, 0.2).sample(square(-1, 1, 17));
  const SurfaceFields F(p);
  const MaxCurvature m = find_max_A(F);
  CHECK(m.lambda < 1e-12);
  const RescaleSpec s = make_rescale_spec(F, m.i, m.j, 9, 1.0);
  try {
    rescale_to_graph(p, s);
    FAIL("expected DegenerateRescale");
  } catch (const ContractError& e) {
    CHECK(e.kind() == ContractError::Kind::DegenerateRescale);
  }
}

TEST_CASE("hemisphere: rescaled |A| at the centre is 1") {
  const GraphPatch p = surfaces::hemisphere(1.0).sample(square(-0.6, 0.6, 65));
  const SurfaceFields F(p);
  const MaxCurvature m = find_max_A(F);
  const RescaleSpec s = make_rescale_spec(F, 32, 32, 33, 0.5);
  const RescaleOutcome out = rescale_to_graph(p, s);
  CHECK_FALSE(out.non_symplectic_center);
  const SurfaceFields after(out.patch);
  CHECK(after.at(16, 16).ext.normA2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(m.lambda == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("z^2 stays holomorphic under blow-up") {
  std::vector<double> deficit;
  for (int n : {33, 65}) {
    const GraphPatch p = surfaces::holomorphic_z2().sample(square(-1, 1, n));
    const SurfaceFields F(p);
    const MaxCurvature m = find_max_A(F);
    const RescaleOutcome out = rescale_to_graph(p, make_rescale_spec(F, m.i, m.j, 33, 1.0));
    CHECK_FALSE(out.non_symplectic_center);
    const double h = 2.0 / (n - 1);
    deficit.push_back(holomorphy_deficit(SurfaceFields(out.patch)));
    CHECK(deficit.back() <= h * h);
    CHECK(SurfaceFields(out.patch).at(16, 16).normA() == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("unitary rescaling preserves min cos(alpha)") {
  const GridSpec G = square(-1, 1, 65);
  const GraphPatch p = surfaces::bump(0.3, 0.5).sample(G);
  const SurfaceFields F(p);
  const RescaleSpec s = make_rescale_spec(F, 32, 32, 33, 0.25);
  const RescaleOutcome out = rescale_to_graph(p, s);
  CHECK_FALSE(out.non_symplectic_center);
  // the window covers |u| <= 0.25 / lambda around the apex
  const double reach = 0.25 / s.lambda * std::sqrt(2.0) * 1.05;
  double before = 1.0;
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i)
      if (std::hypot(G.x(i), G.y(j)) <= reach) before = std::min(before, F.cos_alpha(i, j));
  const double after = SurfaceFields(out.patch).min_cos_alpha();
  CHECK(after >= before - 4 * G.hx * G.hx);
}

TEST_CASE("window escaping the patch") {
  const GraphPatch p = surfaces::bump(0.3, 0.5).sample(square(-1, 1, 33));
  const SurfaceFields F(p);
  try {
    rescale_to_graph(p, make_rescale_spec(F, 16, 16, 17, 50.0));
    FAIL("expected a rescale error");
  } catch (const ContractError& e) {
    CHECK((e.kind() == ContractError::Kind::WindowEscapesPatch ||
           e.kind() == ContractError::Kind::InterpolationDegenerate));
  }
}

TEST_CASE("non-symplectic centre falls back to an orthogonal frame") {
  const GraphPatch p = GraphPatch::sample(square(-1, 1, 33), [](double x, double y) {
    return std::make_pair(2 * x + 0.3 * x * x, -2 * y + 0.2 * x * y);
  });
  const SurfaceFields F(p);
  CHECK(F.cos_alpha(16, 16) < 0.0);
  // window of half-width 0.1 in the original coordinates
  const double lambda = make_rescale_spec(F, 16, 16, 9, 1.0).lambda;
  const RescaleSpec s = make_rescale_spec(F, 16, 16, 9, 0.1 * lambda);
  CHECK_FALSE(blowup_rotation(s).unitary);
  const RescaleOutcome out = rescale_to_graph(p, s);
  CHECK(out.non_symplectic_center);
}

TEST_CASE("holomorphy deficit") {
  CHECK(holomorphy_deficit(SurfaceFields(surfaces::holomorphic_z2().sample(square(-1, 1, 17)))) <= 1e-12);
  CHECK(holomorphy_deficit(SurfaceFields(surfaces::shear(1.0).sample(square(0, 1, 9)))) ==
        doctest::Approx(0.5).epsilon(1e-14));
  for (const auto& ts : bsc::testing::standard_surfaces(33)) {
    const GraphPatch p = ts.surface.sample(ts.grid);
    CHECK(holomorphy_deficit(SurfaceFields(bsc::testing::scaled(p, 2.0))) ==
          doctest::Approx(holomorphy_deficit(SurfaceFields(p))).epsilon(1e-13));
  }
}

TEST_CASE("bicubic interpolation") {
  const GridSpec G = square(-1, 1, 17);
  Field v(G.nx, G.ny);
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) v(i, j) = 1 + 2 * G.x(i) - G.y(j) + 0.5 * G.x(i) * G.y(j);
  Interpolated out;
  REQUIRE(bicubic(G, v, 0.13, -0.37, out));
  CHECK(out.value == doctest::Approx(1 + 0.26 + 0.37 + 0.5 * 0.13 * -0.37).epsilon(1e-12));
  CHECK(out.dx == doctest::Approx(2 + 0.5 * -0.37).epsilon(1e-12));
  CHECK(out.dy == doctest::Approx(-1 + 0.5 * 0.13).epsilon(1e-12));
  CHECK_FALSE(bicubic(G, v, -0.99, 0.0, out));
}
