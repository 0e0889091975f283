#pragma once

#include "bsc/fields.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace bsc {

/// Normal components (along n3, n4) of cos^3(a) H - beta (J (J grad cos a)^T)^perp
/// at the interior nodes; boundary entries are zero.
struct ResidualField {
  Field r3, r4;
  double sup_norm = 0.0;
  double l2_norm = 0.0;  // area weighted

  /// Interleaved (r3, r4) per interior node, row-major; the solver's ordering.
  Eigen::VectorXd interior_vector() const;
};

/// Operator value at one point from its geometry and the coordinate
/// gradient (d/dx, d/dy) of cos(alpha).
Eigen::Vector2d residual_at(const FirstFundamental<double>& fund, const ExtrinsicData<double>& ext,
                            double cos_alpha, const Eigen::Vector2d& dcos, double beta);

/// Same operator on an exact two-jet; the gradient of cos(alpha) is obtained
/// by forward-mode differentiation through the Kahler-angle algebra.
Eigen::Vector2d continuum_residual(const Jet<double>& jet, double beta);

/// Exact coordinate gradient of cos(alpha) along an analytic two-jet.
Eigen::Vector2d continuum_cos_gradient(const Jet<double>& jet);

/// Central-difference gradient of the nodal cos(alpha) field (interior nodes).
Eigen::Vector2d cos_gradient(const SurfaceFields& fields, int i, int j);

/// |grad cos a|^2 and |grad a|^2 in the induced metric. The second is
/// |grad cos a|^2 / sin^2 a, set to zero where sin^2 a < 1e-14.
struct AngleGradient {
  double cos_norm2 = 0.0;
  double alpha_norm2 = 0.0;
};
AngleGradient angle_gradient(const SurfaceFields& fields, int i, int j);

/// Divergence-form Laplace-Beltrami of a nodal field at an interior node.
double laplace_beltrami(const SurfaceFields& fields, const Field& u, int i, int j);

ResidualField residual_field(const SurfaceFields& fields, double beta);

struct EnergyReport {
  double l_beta = 0.0;
  double lq_mass = 0.0;
  double area = 0.0;
  double min_cos_alpha = 1.0;
};

EnergyReport energy_report(const SurfaceFields& fields, double beta, double q);

/// Kahler-angle identity on critical surfaces of L_beta in flat C^2:
///   Delta(1/cos a) - 2|grad a|^2 / (cos a (cos^2 a + beta sin^2 a)) = 0,
/// evaluated at nodes at least two steps from the boundary.
struct EalphaResult {
  Field value;  // zero on the two outer rings
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  double input_residual_sup = 0.0;
  bool residual_warning = false;  // input is not close to critical
};

/// `margin` drops nodes closer than that (in x, y) to the edge from the norms;
/// solutions of the Dirichlet problem are in general singular at the corners.
EalphaResult ealpha_residual(const SurfaceFields& fields, double beta, double margin = 0.0,
                             double residual_warn_threshold = 1e-6);

/// Smooth bump supported in the interior, used as a variation direction.
struct Perturbation {
  Field df, dg;
  double l2_norm = 0.0;  // sqrt(sum (df^2 + dg^2) hx hy)
};
Perturbation random_perturbation(const GridSpec& grid, std::uint64_t seed);

/// |d/dt L_beta(patch + t phi)| at t = 0 by a centred difference.
double energy_stationarity_test(const GraphPatch& patch, double beta, std::uint64_t seed,
                                double t = 1e-5);

}  // namespace bsc
