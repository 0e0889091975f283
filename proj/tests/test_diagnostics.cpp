#include "doctest.h"
#include "support.hpp"

#include "bsc/diagnostics.hpp"
#include "bsc/residual.hpp"

#include <cmath>

using namespace bsc;
using bsc::testing::square;

namespace {

SurfaceFields fields_of(const AnalyticSurface& s, const GridSpec& G) { return SurfaceFields(s.sample(G)); }

// Flat-plane Sobolev ratio of the bump (1 - r^2/R^2)^3 by radial Simpson.
double radial_sobolev_oracle(double R) {
  const int n = 20000;
  const double h = R / n;
  double h2 = 0.0, grad = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = k * h, s = 1 - r * r / (R * R);
    const double w = (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2)) * h / 3 * 2 * M_PI * r;
    h2 += w * std::pow(s, 6);
    grad += w * 6 * r / (R * R) * s * s;
  }
  return std::sqrt(h2) / grad;
}

// Fraction of a fine raster over the triangle's bounding box that lies in
// both the triangle and the disc, times the box area.
double raster_disk_triangle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                            double rho, int n) {
  const Eigen::Vector2d lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
  auto side = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& x) {
    return (q - p).x() * (x - p).y() - (q - p).y() * (x - p).x();
  };
  const double sgn = side(a, b, c) > 0 ? 1 : -1;
  long inside = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d x(lo.x() + (i + 0.5) * (hi.x() - lo.x()) / n, lo.y() + (j + 0.5) * (hi.y() - lo.y()) / n);
      if (x.squaredNorm() < rho * rho && sgn * side(a, b, c) > 0 && sgn * side(a, b, x) >= 0 &&
          sgn * side(b, c, x) >= 0 && sgn * side(c, a, x) >= 0)
        ++inside;
    }
  return static_cast<double>(inside) / (double(n) * n) * (hi - lo).prod();
}

std::size_t flagged(const SurfaceFields& F, double r, double eps) { return concentration_map(F, r, eps).flagged.size(); }

}  // namespace

TEST_CASE("record on closed-form patches") {
  const DiagnosticsRecord flat = diagnostics_record(fields_of(surfaces::affine(0, 0, 0, 0), square(0, 1, 9)), 1, 5);
  CHECK(flat.total_A2 == 0.0);
  CHECK(flat.total_H2 == 0.0);
  CHECK(flat.min_cos_alpha == 1.0);
  CHECK(flat.lq_mass == doctest::Approx(1).epsilon(1e-14));

  const DiagnosticsRecord fy = diagnostics_record(fields_of(surfaces::shear(1.0), square(0, 1, 9)), 1, 5);
  CHECK(fy.lq_mass == doctest::Approx(8.0).epsilon(1e-13));

  // |H| = 2/R on the sphere, so total_H2 / area -> 4/R^2
  const double R = 1.0;
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    const DiagnosticsRecord d = diagnostics_record(fields_of(surfaces::hemisphere(R), square(-0.35, 0.35, n)), 1, 5);
    err.push_back(std::abs(d.total_H2 / d.area - 4 / (R * R)));
  }
  CHECK(err[2] < err[1]);
  CHECK(err[1] < err[0]);
  CHECK(err[2] < 1e-3);
}

TEST_CASE("record invariants on the standard surfaces") {
  for (const auto& ts : bsc::testing::standard_surfaces(17)) {
    CAPTURE(ts.name);
    const DiagnosticsRecord d = diagnostics_record(fields_of(ts.surface, ts.grid), 1.0, 5.0);
    CHECK(d.total_H2 <= 2 * d.total_A2 * (1 + 1e-12) + 1e-15);
    CHECK(d.min_cos_alpha > 0.0);
    CHECK(d.min_cos_alpha <= 1.0);
    CHECK(d.area <= d.lq_mass * (1 + 1e-14));
    CHECK(std::isfinite(d.gauss_residual_sup));
    CHECK(std::isfinite(d.ealpha_residual_sup));
  }
}

TEST_CASE("integrated Gauss curvature: intrinsic against extrinsic") {
  std::vector<double> err;
  for (int n : {17, 33, 65}) {
    const SurfaceFields F = fields_of(surfaces::bump(0.3, 0.5), square(-1, 1, n));
    double intrinsic = 0.0, extrinsic = 0.0;
    for (int j = 2; j < n - 2; ++j)
      for (int i = 2; i < n - 2; ++i) {
        intrinsic += F.at(i, j).weight * brioschi_curvature(F, i, j);
        extrinsic += F.at(i, j).weight * 0.5 * (F.at(i, j).ext.normH2() - F.at(i, j).ext.normA2);
      }
    err.push_back(std::abs(intrinsic - extrinsic));
  }
  const double p = bsc::testing::finest_order(err);
  CHECK(p > 1.7);
  CHECK(p < 2.5);
}

TEST_CASE("H bound vanishes where both sides do") {
  for (double beta : {0.5, 1.0, 2.0}) {
    CHECK(pointwise_H_bound_check(fields_of(surfaces::affine(0.2, 0.1, -0.3, 0.4), square(-1, 1, 17)), beta)
              .sup_discrepancy < 1e-12);
    CHECK(pointwise_H_bound_check(fields_of(surfaces::holomorphic_z2(), square(-1, 1, 17)), beta).sup_discrepancy <
          1e-12);
  }
  CHECK(pointwise_H_bound_check(fields_of(surfaces::bump(0.3, 0.4), square(-1, 1, 17)), 1.0).residual_warning);
}

TEST_CASE("disc-triangle intersection area") {
  const Eigen::Vector2d a(-0.1, -0.1), b(0.1, -0.1), c(0, 0.1);
  CHECK(disk_triangle_area(a, b, c, 5.0) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(disk_triangle_area({-10, -10}, {10, -10}, {0, 10}, 0.5) == doctest::Approx(M_PI * 0.25).epsilon(1e-14));
  CHECK(disk_triangle_area({-10, 0}, {10, 0}, {0, 10}, 0.5) == doctest::Approx(M_PI * 0.125).epsilon(1e-14));
  CHECK(disk_triangle_area({2, 2}, {3, 2}, {2, 3}, 0.5) == 0.0);
  const Eigen::Vector2d p(0.3, -0.4), q(-0.2, 0.5), r(0.6, 0.3);
  for (double rho : {0.3, 0.45, 0.6}) {
    CAPTURE(rho);
    CHECK(std::abs(disk_triangle_area(p, q, r, rho) - raster_disk_triangle(p, q, r, rho, 3000)) < 2e-4);
    CHECK(disk_triangle_area(p, q, r, rho) == doctest::Approx(disk_triangle_area(q, p, r, rho)).epsilon(1e-13));
  }
}

TEST_CASE("balls on planes") {
  const std::vector<double> radii{0.1, 0.2, 0.4};
  for (const AnalyticSurface& s : {surfaces::affine(0, 0, 0, 0), surfaces::shear(1.0)}) {
    CAPTURE(s.name);
    const SurfaceFields F = fields_of(s, square(-1, 1, 33));
    const auto stats = ball_stats(F, Vec4::Zero(), radii);
    for (const auto& b : stats) {
      CHECK(b.ratio == doctest::Approx(M_PI).epsilon(1e-12));
      CHECK(std::abs(b.annulus_term) < 1e-12);
      CHECK(std::abs(b.h_term) < 1e-12);
    }
    const MonotonicityReport rep = monotonicity_check(stats, 1e-12);
    CHECK(rep.pairs.size() == 3);
    CHECK(std::abs(rep.min_slack()) <= 1e-12);
    CHECK(rep.all_ok);
  }
}

TEST_CASE("ball contract") {
  const SurfaceFields F = fields_of(surfaces::holomorphic_z2(), square(-1, 1, 33));
  CHECK_THROWS_AS(ball_stats(F, Vec4::Zero(), {0.2, 0.1}), ContractError);
  CHECK_THROWS_AS(ball_stats(F, Vec4::Zero(), {}), ContractError);
  try {
    ball_stats(F, Vec4::Zero(), {0.5, 1.5});  // boundary points have |F| >= sqrt(2)
    FAIL("expected BallEscapesPatch");
  } catch (const ContractError& e) {
    CHECK(e.kind() == ContractError::Kind::BallEscapesPatch);
  }
}

TEST_CASE("monotonicity on the z^2 patch") {
  const std::vector<double> radii{0.1, 0.2, 0.3};
  const SurfaceFields fine = fields_of(surfaces::holomorphic_z2(), square(-1, 1, 129));
  const SurfaceFields coarse = fields_of(surfaces::holomorphic_z2(), square(-1, 1, 65));
  const auto a = ball_stats(fine, Vec4::Zero(), radii), b = ball_stats(coarse, Vec4::Zero(), radii);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].annulus_term >= 0.0);
    if (k) CHECK(a[k].area_in_ball >= a[k - 1].area_in_ball);
    CHECK(std::abs(a[k].h_term) < 1e-3);
  }
  const double tol = refinement_tolerance(a, b);
  const MonotonicityReport rep = monotonicity_check(a, tol);
  CHECK(rep.all_ok);
  for (const auto& p : rep.pairs) CHECK(p.slack >= -0.03 * M_PI);
}

TEST_CASE("Sobolev ratio") {
  const double R = 0.4;
  const SurfaceFields flat = fields_of(surfaces::affine(0, 0, 0, 0), square(-1, 1, 129));
  const SobolevReport one = sobolev_ratio(flat, {{0.0, 0.0, R}});
  REQUIRE(one.ratios.size() == 1);
  CHECK(one.ratios[0] == doctest::Approx(radial_sobolev_oracle(R)).epsilon(1e-3));

  // h(lambda x) on the plane scaled by lambda
  const SurfaceFields big = fields_of(surfaces::affine(0, 0, 0, 0), square(-2, 2, 129));
  CHECK(sobolev_ratio(big, {{0.0, 0.0, 2 * R}}).ratios[0] == doctest::Approx(one.ratios[0]).epsilon(1e-12));

  const SurfaceFields hemi = fields_of(surfaces::hemisphere(1.0), square(-0.5, 0.5, 33));
  const SobolevReport h = sobolev_ratio(hemi, standard_bump_family(hemi.grid()));
  CHECK(h.ratios.size() == 27);
  for (double r : h.ratios) CHECK(std::isfinite(r));
  CHECK(h.within_bound);
  CHECK(h.sup_ratio <= 10.0);
}

TEST_CASE("concentration") {
  const SurfaceFields flat = fields_of(surfaces::affine(0.1, 0.2, 0.3, 0.4), square(-1, 1, 33));
  CHECK(flagged(flat, 0.25, 1e-9) == 0);

  const GridSpec G = square(-1, 1, 65);
  const SurfaceFields bump = fields_of(surfaces::bump(0.3, 0.15), G);
  const Field nu = concentration_measure(bump, 0.1);
  Eigen::Index mi = 0, mj = 0;
  nu.maxCoeff(&mi, &mj);
  CHECK(std::abs(G.x(static_cast<int>(mi))) <= G.hx * 1.01);
  CHECK(std::abs(G.y(static_cast<int>(mj))) <= G.hy * 1.01);
  std::size_t prev = SIZE_MAX;
  for (double eps : {0.01, 0.1, 1.0}) {
    const auto rep = concentration_map(bump, 0.1, eps);
    CHECK(rep.flagged.size() <= prev);
    prev = rep.flagged.size();
    for (const auto& n : rep.flagged) CHECK(std::hypot(G.x(n.i), G.y(n.j)) < 0.5);
  }

  // antitone in epsilon, monotone in r, on every standard surface
  for (const auto& ts : bsc::testing::standard_surfaces(17)) {
    const SurfaceFields F = fields_of(ts.surface, ts.grid);
    std::size_t last = SIZE_MAX;
    for (double eps : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) {
      CHECK(flagged(F, 0.2, eps) <= last);
      last = flagged(F, 0.2, eps);
    }
    CHECK(flagged(F, 0.1, 1e-3) <= flagged(F, 0.2, 1e-3));
    CHECK(flagged(F, 0.2, 1e-3) <= flagged(F, 0.4, 1e-3));
  }

  const SurfaceFields z2 = fields_of(surfaces::holomorphic_z2(), square(-1, 1, 33));
  const double total = diagnostics_record(z2, 1, 5).total_A2;
  CHECK(flagged(z2, 10.0, total * 1.0001) == 0);
  CHECK_THROWS_AS(concentration_map(z2, 0.0, 1.0), ContractError);
}

TEST_CASE("Moser report") {
  const MoserReport flat = moser_report(fields_of(surfaces::affine(0, 0, 0, 0), square(0, 1, 9)), 5);
  CHECK(flat.sup_inv_cos == 1.0);
  CHECK(flat.lq_mass == doctest::Approx(1.0));
  const MoserReport fy = moser_report(fields_of(surfaces::shear(1.0), square(0, 1, 9)), 5);
  CHECK(fy.sup_inv_cos == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(fy.ratio == doctest::Approx(std::sqrt(2.0) / std::pow(8.0, 0.2)).epsilon(1e-13));
}

TEST_CASE("small-energy scan") {
  const SmallEnergyScan flat =
      small_energy_scan(fields_of(surfaces::affine(0, 0, 0, 0), square(-1, 1, 33)), Vec4::Zero(), 0.5);
  CHECK(flat.energy_in_ball == 0.0);
  CHECK(flat.scaled_sup == 0.0);

  const GraphPatch z2 = surfaces::holomorphic_z2().sample(square(-1, 1, 65));
  const SurfaceFields F(z2);
  double last_e = -1, last_s = -1;
  for (double r0 : {0.05, 0.1, 0.2, 0.3}) {
    const SmallEnergyScan s = small_energy_scan(F, Vec4::Zero(), r0);
    CHECK(std::isfinite(s.energy_in_ball));
    CHECK(s.energy_in_ball >= last_e);
    CHECK(s.scaled_sup >= last_s);
    last_e = s.energy_in_ball;
    last_s = s.scaled_sup;
  }
  const SmallEnergyScan a = small_energy_scan(F, Vec4::Zero(), 0.3);
  const SmallEnergyScan b = small_energy_scan(SurfaceFields(bsc::testing::scaled(z2, 2.0)), Vec4::Zero(), 0.6);
  CHECK(b.energy_in_ball == doctest::Approx(a.energy_in_ball).epsilon(1e-12));
  CHECK(b.scaled_sup == doctest::Approx(a.scaled_sup).epsilon(1e-12));
  CHECK_THROWS_AS(small_energy_scan(F, Vec4::Zero(), 1.5), ContractError);
}

TEST_CASE("scale invariance under F -> 2F") {
  for (const auto& ts : bsc::testing::standard_surfaces(33)) {
    CAPTURE(ts.name);
    const GraphPatch p = ts.surface.sample(ts.grid);
    const SurfaceFields a(p), b(bsc::testing::scaled(p, 2.0));
    const DiagnosticsRecord ra = diagnostics_record(a, 1, 5), rb = diagnostics_record(b, 1, 5);
    CHECK(rb.total_A2 == doctest::Approx(ra.total_A2).epsilon(1e-12));
    CHECK(rb.total_H2 == doctest::Approx(ra.total_H2).epsilon(1e-12));
    CHECK(rb.min_cos_alpha == doctest::Approx(ra.min_cos_alpha).epsilon(1e-14));
    CHECK(rb.area == doctest::Approx(4 * ra.area).epsilon(1e-14));
    CHECK((a.cos_alpha_field() - b.cos_alpha_field()).abs().maxCoeff() < 1e-14);
  }
  const GraphPatch z2 = surfaces::holomorphic_z2().sample(square(-1, 1, 33));
  const auto sa = ball_stats(SurfaceFields(z2), Vec4::Zero(), {0.1, 0.2, 0.3});
  const auto sb = ball_stats(SurfaceFields(bsc::testing::scaled(z2, 2.0)), Vec4::Zero(), {0.2, 0.4, 0.6});
  for (std::size_t k = 0; k < sa.size(); ++k) {
    CHECK(sb[k].ratio == doctest::Approx(sa[k].ratio).epsilon(1e-12));
    CHECK(sb[k].annulus_term == doctest::Approx(sa[k].annulus_term).epsilon(1e-10));
  }
}
