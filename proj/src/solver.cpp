#include "bsc/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bsc {

void SolverConfig::validate() const {
  using K = ContractError::Kind;
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError(K::OutOfRange, "beta must be >= 0");
  if (!(tol_residual > 0.0)) throw ContractError(K::OutOfRange, "tol_residual must be > 0");
  if (max_newton_iters <= 0) throw ContractError(K::OutOfRange, "max_newton_iters must be > 0");
  if (!(damping > 0.0 && damping < 1.0)) throw ContractError(K::OutOfRange, "damping must lie in (0,1)");
  if (max_backtracks <= 0) throw ContractError(K::OutOfRange, "max_backtracks must be > 0");
  if (!(jacobian_fd_eps > 0.0)) throw ContractError(K::OutOfRange, "jacobian_fd_eps must be > 0");
  if (!(cos_floor > 0.0 && cos_floor < 1.0)) throw ContractError(K::OutOfRange, "cos_floor must lie in (0,1)");
}

void ContinuationSchedule::validate() const {
  using K = ContractError::Kind;
  if (beta_values.empty()) throw ContractError(K::OutOfRange, "beta schedule is empty");
  for (double b : beta_values)
    if (!(b >= 0.0) || !std::isfinite(b)) throw ContractError(K::OutOfRange, "beta values must be >= 0");
  if (!(min_step > 0.0)) throw ContractError(K::OutOfRange, "min_step must be > 0");
}

const char* to_string(SolveFailure f) {
  switch (f) {
    case SolveFailure::None: return "none";
    case SolveFailure::MaxItersExceeded: return "MaxItersExceeded";
    case SolveFailure::CosFloorViolated: return "CosFloorViolated";
    case SolveFailure::SingularJacobian: return "SingularJacobian";
    case SolveFailure::LineSearchStalled: return "LineSearchStalled";
  }
  return "unknown";
}

Forcing manufactured_forcing(const GridSpec& grid, const AnalyticSurface& target, double beta) {
  Forcing F{Field::Zero(grid.nx, grid.ny), Field::Zero(grid.nx, grid.ny)};
  for (int j = 1; j < grid.ny - 1; ++j)
    for (int i = 1; i < grid.nx - 1; ++i) {
      const Eigen::Vector2d r = continuum_residual(target.jet(grid.x(i), grid.y(j)), beta);
      F.r3(i, j) = r(0);
      F.r4(i, j) = r(1);
    }
  return F;
}

namespace {

int interior_index(const GridSpec& G, int i, int j) { return (j - 1) * (G.nx - 2) + (i - 1); }

struct Evaluation {
  Eigen::VectorXd r;
  double merit = 0.0;  // sup |r|
  double sup = 0.0;    // raw residual, whatever the scaling of r
  double l2 = 0.0;
  double min_cos = 1.0;
};

Evaluation evaluate(const GraphPatch& patch, double beta, const Forcing* forcing, bool normalized) {
  const SurfaceFields fields(patch);
  const ResidualField rf = residual_field(fields, beta);
  const GridSpec& G = patch.grid();
  Evaluation e;
  e.min_cos = fields.min_cos_alpha();
  e.r.resize(2 * G.interior_count());
  double l2 = 0.0;
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      double a = rf.r3(i, j), b = rf.r4(i, j);
      if (forcing) {
        a -= forcing->r3(i, j);
        b -= forcing->r4(i, j);
      }
      const int k = interior_index(G, i, j);
      e.sup = std::max({e.sup, std::abs(a), std::abs(b)});
      l2 += fields.at(i, j).weight * (a * a + b * b);
      if (normalized) {
        const double c = fields.cos_alpha(i, j);
        a /= c * c * c;
        b /= c * c * c;
      }
      e.r(2 * k) = a;
      e.r(2 * k + 1) = b;
      e.merit = std::max({e.merit, std::abs(a), std::abs(b)});
    }
  e.l2 = std::sqrt(l2);
  return e;
}

bool solve_linear(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs,
                  LinearSolverKind kind, Eigen::VectorXd& x) {
  if (kind == LinearSolverKind::Dense) {
    const Eigen::MatrixXd D(J);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    if (!lu.isInvertible()) return false;
    x = lu.solve(rhs);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return false;
    x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) return false;
  }
  return x.allFinite();
}

}  // namespace

Eigen::VectorXd interior_unknowns(const GraphPatch& patch) {
  const GridSpec& G = patch.grid();
  Eigen::VectorXd u(2 * G.interior_count());
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      const int k = interior_index(G, i, j);
      u(2 * k) = patch.f()(i, j);
      u(2 * k + 1) = patch.g()(i, j);
    }
  return u;
}

void set_interior_unknowns(GraphPatch& patch, const Eigen::VectorXd& u) {
  const GridSpec& G = patch.grid();
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      const int k = interior_index(G, i, j);
      patch.f()(i, j) = u(2 * k);
      patch.g()(i, j) = u(2 * k + 1);
    }
}

Eigen::VectorXd residual_vector(const GraphPatch& patch, double beta, const Forcing* forcing,
                                bool normalized) {
  return evaluate(patch, beta, forcing, normalized).r;
}

GraphPatch harmonic_extension(const GraphPatch& patch) {
  const GridSpec& G = patch.grid();
  const int n = G.interior_count();
  const double ax = 1.0 / (G.hx * G.hx), ay = 1.0 / (G.hy * G.hy);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  const Field& bf = patch.boundary_f();
  const Field& bg = patch.boundary_g();
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      const int row = interior_index(G, i, j);
      trip.emplace_back(row, row, 2 * ax + 2 * ay);
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int a = i + di[k], b = j + dj[k];
        const double w = k < 2 ? ax : ay;
        if (G.is_boundary(a, b)) {
          rhs(row, 0) += w * bf(a, b);
          rhs(row, 1) += w * bg(a, b);
        } else {
          trip.emplace_back(row, interior_index(G, a, b), -w);
        }
      }
    }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
  const Eigen::MatrixXd sol = ldlt.solve(rhs);

  GraphPatch out = patch;
  out.restore_boundary();
  for (int j = 1; j < G.ny - 1; ++j)
    for (int i = 1; i < G.nx - 1; ++i) {
      const int row = interior_index(G, i, j);
      out.f()(i, j) = sol(row, 0);
      out.g()(i, j) = sol(row, 1);
    }
  return out;
}

Eigen::SparseMatrix<double> fd_jacobian(const GraphPatch& patch, double beta, double eps,
                                        const Forcing* forcing, bool normalized) {
  const GridSpec& G = patch.grid();
  const int N = 2 * G.interior_count();
  const Eigen::VectorXd r0 = residual_vector(patch, beta, forcing, normalized);

  // A node influences residuals within L1 distance 2, so nodes congruent mod 5
  // in both directions never share a residual row.
  constexpr int kColours = 5;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 26);
  for (int cy = 0; cy < kColours; ++cy)
    for (int cx = 0; cx < kColours; ++cx)
      for (int comp = 0; comp < 2; ++comp) {
        GraphPatch p = patch;
        Field& target = comp == 0 ? p.f() : p.g();
        Field step = Field::Zero(G.nx, G.ny);
        bool any = false;
        for (int j = 1; j < G.ny - 1; ++j)
          for (int i = 1; i < G.nx - 1; ++i)
            if (i % kColours == cx && j % kColours == cy) {
              const double h = eps * std::max(1.0, std::abs(target(i, j)));
              // make the step exactly representable
              const double up = target(i, j) + h;
              step(i, j) = up - target(i, j);
              target(i, j) = up;
              any = true;
            }
        if (!any) continue;
        const Eigen::VectorXd r = residual_vector(p, beta, forcing, normalized);
        for (int j = 1; j < G.ny - 1; ++j)
          for (int i = 1; i < G.nx - 1; ++i) {
            if (i % kColours != cx || j % kColours != cy) continue;
            const int col = 2 * interior_index(G, i, j) + comp;
            for (int dj = -2; dj <= 2; ++dj)
              for (int di = -2; di <= 2; ++di) {
                if (std::abs(di) + std::abs(dj) > 2) continue;
                const int a = i + di, b = j + dj;
                if (a < 1 || b < 1 || a > G.nx - 2 || b > G.ny - 2) continue;
                const int row = 2 * interior_index(G, a, b);
                for (int rc = 0; rc < 2; ++rc) {
                  const double v = (r(row + rc) - r0(row + rc)) / step(i, j);
                  if (v != 0.0) trip.emplace_back(row + rc, col, v);
                }
              }
          }
      }
  Eigen::SparseMatrix<double> J(N, N);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

SolveResult newton_solve(const GraphPatch& patch, const SolverConfig& config, const Forcing* forcing) {
  config.validate();
  SolveResult out{patch, {}};
  out.patch.restore_boundary();
  SolveReport& rep = out.report;

  if (!(SurfaceFields(out.patch).min_cos_alpha() >= config.cos_floor)) {
    rep.failure = SolveFailure::CosFloorViolated;
    rep.message = "initial patch violates the cos(alpha) floor";
    return out;
  }

  Evaluation cur = evaluate(out.patch, config.beta, forcing, true);
  rep.history.push_back({0, cur.sup, cur.l2, cur.min_cos});
  int iter = 0;
  while (true) {
    if (cur.sup <= config.tol_residual) {
      rep.converged = true;
      break;
    }
    if (iter == config.max_newton_iters) {
      rep.failure = SolveFailure::MaxItersExceeded;
      rep.message = "no convergence in " + std::to_string(iter) + " iterations";
      break;
    }
    const auto J = fd_jacobian(out.patch, config.beta, config.jacobian_fd_eps, forcing, true);
    Eigen::VectorXd du;
    if (!solve_linear(J, -cur.r, config.linear_solver, du)) {
      rep.failure = SolveFailure::SingularJacobian;
      rep.message = "linear solve failed";
      break;
    }
    const Eigen::VectorXd u = interior_unknowns(out.patch);
    double t = 1.0;
    bool accepted = false, floor_hit = false;
    GraphPatch trial = out.patch;
    Evaluation next;
    for (int bt = 0; bt < config.max_backtracks; ++bt, t *= config.damping) {
      set_interior_unknowns(trial, u + t * du);
      if (!(SurfaceFields(trial).min_cos_alpha() >= config.cos_floor)) {
        floor_hit = true;
        continue;
      }
      next = evaluate(trial, config.beta, forcing, true);
      if (next.merit < (1.0 - 1e-4 * t) * cur.merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rep.failure = floor_hit ? SolveFailure::CosFloorViolated : SolveFailure::LineSearchStalled;
      rep.message = floor_hit ? "every damped step crosses the cos(alpha) floor"
                              : "backtracking found no decrease";
      break;
    }
    out.patch = std::move(trial);
    cur = std::move(next);
    ++iter;
    rep.history.push_back({iter, cur.sup, cur.l2, cur.min_cos});
  }
  rep.iterations = iter;
  rep.final_sup = cur.sup;
  rep.final_l2 = cur.l2;
  return out;
}

Spectrum linearization_spectrum(const GraphPatch& patch, const SolverConfig& config) {
  const Eigen::SparseMatrix<double> J = fd_jacobian(patch, config.beta, config.jacobian_fd_eps);
  Spectrum s;
  const int N = static_cast<int>(J.rows());
  if (N <= 1200) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(J)};
    const auto& sv = svd.singularValues();
    s.sigma_max = sv(0);
    s.sigma_min = sv(N - 1);
  } else {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(N).normalized();
    for (int k = 0; k < 300; ++k) {
      Eigen::VectorXd y = J.transpose() * (J * x);
      const double lam = y.norm();
      x = y / lam;
      s.sigma_max = std::sqrt(lam);
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
    const Eigen::SparseMatrix<double> Jt = J.transpose();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lut(Jt);
    if (lu.info() != Eigen::Success || lut.info() != Eigen::Success) {
      s.sigma_min = 0.0;
    } else {
      x = Eigen::VectorXd::Ones(N).normalized();
      double prev = 0.0;
      for (int k = 0; k < 200; ++k) {
        Eigen::VectorXd y = lu.solve(lut.solve(x));  // (J^T J)^{-1} x
        const double lam = y.norm();
        x = y / lam;
        s.sigma_min = 1.0 / std::sqrt(lam);
        if (std::abs(s.sigma_min - prev) <= 1e-12 * s.sigma_min) break;
        prev = s.sigma_min;
      }
    }
  }
  s.condition = s.sigma_min > 0.0 ? s.sigma_max / s.sigma_min : std::numeric_limits<double>::infinity();
  return s;
}

std::vector<ContinuationStep> continuation_run(const GraphPatch& patch,
                                               const ContinuationSchedule& schedule,
                                               const SolverConfig& config, double q) {
  schedule.validate();
  config.validate();
  std::vector<ContinuationStep> steps;
  SolverConfig cfg = config;
  GraphPatch current = patch;
  double beta_now = 0.0;

  for (std::size_t k = 0; k < schedule.beta_values.size(); ++k) {
    const double target = schedule.beta_values[k];
    SolveReport last;
    if (k == 0) {
      cfg.beta = target;
      SolveResult r = newton_solve(current, cfg);
      if (!r.report.converged)
        throw StepUnderflow(steps, std::nullopt,
                            std::string("first beta did not converge: ") + to_string(r.report.failure));
      current = std::move(r.patch);
      last = std::move(r.report);
    } else {
      double step = target - beta_now;
      while (beta_now != target) {
        const double trial_beta = std::abs(target - beta_now) <= std::abs(step) ? target : beta_now + step;
        cfg.beta = trial_beta;
        SolveResult r = newton_solve(current, cfg);
        if (r.report.converged) {
          current = std::move(r.patch);
          beta_now = trial_beta;
          last = std::move(r.report);
          continue;
        }
        step *= 0.5;
        if (!schedule.adaptive || std::abs(step) < schedule.min_step)
          throw StepUnderflow(steps, beta_now,
                              "continuation stuck at beta = " + std::to_string(beta_now) + " (" +
                                  to_string(r.report.failure) + ")");
      }
      if (last.history.empty()) {
        // degenerate step (target equals the previous beta): nothing was solved
        last = steps.back().report;
      }
    }
    beta_now = target;
    ContinuationStep st;
    st.beta = target;
    st.patch = current;
    st.diagnostics = diagnostics_record(SurfaceFields(current), target, q);
    st.report = std::move(last);
    steps.push_back(std::move(st));
  }
  return steps;
}

}  // namespace bsc
