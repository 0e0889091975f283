#pragma once

#include "bsc/diagnostics.hpp"
#include "bsc/errors.hpp"
#include "bsc/residual.hpp"
#include "bsc/surfaces.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <vector>

namespace bsc {

enum class LinearSolverKind { SparseLU, Dense };

struct SolverConfig {
  double beta = 1.0;
  double tol_residual = 1e-10;  // sup norm
  int max_newton_iters = 50;
  double damping = 0.5;  // backtracking factor
  int max_backtracks = 30;
  double jacobian_fd_eps = 1e-7;  // relative step of the difference quotient
  double cos_floor = 1e-3;        // steps may never push min cos(alpha) below this
  LinearSolverKind linear_solver = LinearSolverKind::SparseLU;

  void validate() const;
};

struct ContinuationSchedule {
  std::vector<double> beta_values;
  bool adaptive = true;
  double min_step = 1e-4;

  void validate() const;
};

enum class SolveFailure { None, MaxItersExceeded, CosFloorViolated, SingularJacobian, LineSearchStalled };

const char* to_string(SolveFailure f);

struct IterationLog {
  int iter = 0;
  double res_sup = 0.0;
  double res_l2 = 0.0;
  double min_cos_alpha = 1.0;
};

struct SolveReport {
  int iterations = 0;
  double final_sup = 0.0;
  double final_l2 = 0.0;
  std::vector<IterationLog> history;  // entry k is the state after k Newton steps
  bool converged = false;
  SolveFailure failure = SolveFailure::None;
  std::string message;
};

struct SolveResult {
  GraphPatch patch;
  SolveReport report;
};

/// Right-hand side for manufactured problems: solve residual = forcing.
struct Forcing {
  Field r3, r4;
};

/// Forcing equal to the exact operator of an analytic surface at the nodes.
Forcing manufactured_forcing(const GridSpec& grid, const AnalyticSurface& target, double beta);

/// Componentwise discrete harmonic extension of the boundary data.
GraphPatch harmonic_extension(const GraphPatch& patch);

/// Interleaved (f, g) interior unknowns, row-major.
Eigen::VectorXd interior_unknowns(const GraphPatch& patch);
void set_interior_unknowns(GraphPatch& patch, const Eigen::VectorXd& u);

/// Residual (minus forcing) in solver ordering. With `normalized` each node's
/// pair is divided by cos^3(alpha) there, the form Newton works with: same
/// zeros, but the residual can no longer be shrunk by driving cos(alpha) to 0.
Eigen::VectorXd residual_vector(const GraphPatch& patch, double beta, const Forcing* forcing = nullptr,
                                bool normalized = false);

/// Difference-quotient Jacobian of residual_vector; columns are grouped by a
/// 25-colouring of the grid so that each group costs one residual evaluation.
Eigen::SparseMatrix<double> fd_jacobian(const GraphPatch& patch, double beta, double eps,
                                        const Forcing* forcing = nullptr, bool normalized = false);

/// Damped Newton on the interior unknowns; the Dirichlet data never moves.
/// Steps and backtracking use the normalized residual, the stopping test and
/// the log use the raw one.
SolveResult newton_solve(const GraphPatch& patch, const SolverConfig& config,
                         const Forcing* forcing = nullptr);

struct Spectrum {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
};

/// Extreme singular values of the difference-quotient Jacobian at the patch.
Spectrum linearization_spectrum(const GraphPatch& patch, const SolverConfig& config);

struct ContinuationStep {
  double beta = 0.0;
  GraphPatch patch;
  DiagnosticsRecord diagnostics;
  SolveReport report;
};

/// Continuation could not reach the next scheduled beta.
class StepUnderflow : public ContractError {
 public:
  StepUnderflow(std::vector<ContinuationStep> completed, std::optional<double> last_good_beta,
                const std::string& what)
      : ContractError(Kind::StepUnderflow, what),
        completed_(std::move(completed)),
        last_good_beta_(last_good_beta) {}

  const std::vector<ContinuationStep>& completed() const { return completed_; }
  std::optional<double> last_good_beta() const { return last_good_beta_; }

 private:
  std::vector<ContinuationStep> completed_;
  std::optional<double> last_good_beta_;
};

/// Solves at each scheduled beta, warm-starting from the previous solution and
/// bisecting the step on failure when the schedule is adaptive.
std::vector<ContinuationStep> continuation_run(const GraphPatch& patch,
                                               const ContinuationSchedule& schedule,
                                               const SolverConfig& config, double q = 5.0);

}  // namespace bsc
