#pragma once

#include "bsc/fields.hpp"

#include <vector>

namespace bsc {

/// Scalars controlled by the compactness theory, for one surface at one beta.
struct DiagnosticsRecord {
  double beta = 0.0;
  double min_cos_alpha = 1.0;
  double lq_mass = 0.0;   // int 1/cos^q
  double total_A2 = 0.0;  // int |A|^2
  double total_H2 = 0.0;  // int |H|^2
  double sup_A = 0.0;
  double area = 0.0;
  double l_beta = 0.0;
  double gauss_residual_sup = 0.0;
  double ealpha_residual_sup = 0.0;
};

DiagnosticsRecord diagnostics_record(const SurfaceFields& fields, double beta, double q);

/// sup over interior nodes of | |H| - beta sin^2/cos^2 |grad alpha| |, with
/// grad cos(alpha) taken by the chain rule through each node's two-jet (the
/// residual differences the cos field instead). Nodes closer than `margin` to
/// the edge are skipped.
struct HBoundCheck {
  double sup_discrepancy = 0.0;
  double input_residual_sup = 0.0;
  bool residual_warning = false;
};
HBoundCheck pointwise_H_bound_check(const SurfaceFields& fields, double beta, double margin = 0.0,
                                    double residual_warn_threshold = 1e-6);

// ---------------------------------------------------------------------------
// Extrinsic balls and the monotonicity formula (flat ambient, k = 2).

/// Area of the disc of radius rho centred at the origin intersected with the
/// triangle (a, b, c) in the plane.
double disk_triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& c, double rho);

/// Quantities on B_s(center) intersected with the surface. Integrals use the
/// piecewise-linear surface through the nodes, each triangle clipped exactly
/// against the ball; integrands are vertex averages.
struct BallStat {
  Vec4 center = Vec4::Zero();
  double radius = 0.0;
  double area_in_ball = 0.0;
  double ratio = 0.0;         // area_in_ball / s^2
  double annulus_term = 0.0;  // int over B_s \ B_prev of |grad^perp r|^2 / r^2
  double h_term = 0.0;        // int_prev^s (1 / 2 sigma^3) int_{B_sigma} H(r^2) d sigma
  double perp_in_ball = 0.0;  // int_{B_s} |grad^perp r|^2 / r^2
  double H2_in_ball = 0.0;    // int_{B_s} |H|^2
  double h_cumulative = 0.0;  // h_term summed from the first radius
};

/// Radii must be positive and strictly ascending; throws
/// ContractError(BallEscapesPatch) when the largest ball reaches the boundary.
std::vector<BallStat> ball_stats(const SurfaceFields& fields, const Vec4& center,
                                 const std::vector<double>& radii);

struct PairSlack {
  double s1 = 0.0, s2 = 0.0;
  double annulus_term = 0.0;
  double h_term = 0.0;
  double slack = 0.0;      // ratio(s2) - ratio(s1) - annulus - h_term
  double lhs_simon = 0.0;  // ratio(s1) + annulus
  double rhs_simon = 0.0;  // 2 (ratio(s2) + int_{B_s2} |H|^2)
  bool monotone_ok = false;
  bool simon_ok = false;
};

struct MonotonicityReport {
  std::vector<PairSlack> pairs;
  double tol_quad = 0.0;
  bool all_ok = false;
  double min_slack() const;
};

/// Every pair s1 < s2 of the given stats.
MonotonicityReport monotonicity_check(const std::vector<BallStat>& stats, double tol_quad);

/// Quadrature error from one halving of h: the largest change between two
/// resolutions in any pair's slack or in either side of the Simon form.
/// Both lists must use the same radii.
double refinement_tolerance(const std::vector<BallStat>& fine, const std::vector<BallStat>& coarse);

// ---------------------------------------------------------------------------

/// h = (1 - |p - c|^2 / R^2)^3 in the parameter plane, zero outside.
struct TestBump {
  double cx = 0.0, cy = 0.0, radius = 1.0;
};

/// 3 x 3 centres times 3 radii, all supported strictly inside the domain.
std::vector<TestBump> standard_bump_family(const GridSpec& grid);

struct SobolevReport {
  std::vector<double> ratios;  // one per non-zero bump
  double sup_ratio = 0.0;
  double bound = 10.0;
  bool within_bound = false;
};

/// (int h^2)^{1/2} / int (|grad h| + |H| h) for each bump.
SobolevReport sobolev_ratio(const SurfaceFields& fields, const std::vector<TestBump>& bumps,
                            double bound = 10.0);

struct FlaggedNode {
  int i = 0, j = 0;
  double mass = 0.0;
};

struct ConcentrationReport {
  double epsilon = 0.0;
  double ball_radius = 0.0;
  std::vector<FlaggedNode> flagged;
};

/// nu(x) = int_{B_r(x)} |A|^2 at each node; flags nodes with nu >= epsilon.
ConcentrationReport concentration_map(const SurfaceFields& fields, double r, double epsilon);

/// nu(x) for every node (the measure behind concentration_map).
Field concentration_measure(const SurfaceFields& fields, double r);

struct MoserReport {
  double sup_inv_cos = 1.0;
  double lq_mass = 0.0;
  double ratio = 0.0;  // sup_inv_cos / lq_mass^{1/q}
};

MoserReport moser_report(const SurfaceFields& fields, double q);

struct SmallEnergyScan {
  double energy_in_ball = 0.0;   // int_{B_r0} |A|^2
  double scaled_sup = 0.0;       // max_sigma sigma^2 sup_{B_{r0 - sigma}} |A|^2
};

SmallEnergyScan small_energy_scan(const SurfaceFields& fields, const Vec4& center, double r0,
                                  int samples = 32);

}  // namespace bsc
