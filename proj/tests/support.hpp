// Shared fixtures for the unit tests and the acceptance binary.
#pragma once

#include "bsc/diagnostics.hpp"
#include "bsc/solver.hpp"
#include "bsc/surfaces.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace bsc::testing {

inline GridSpec square(double lo, double hi, int n) { return GridSpec::over(lo, hi, lo, hi, n, n); }

/// Observed order between consecutive errors on grids whose spacing halves.
inline std::vector<double> pairwise_orders(const std::vector<double>& err) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) out.push_back(std::log2(err[k] / err[k + 1]));
  return out;
}

inline double finest_order(const std::vector<double>& err) { return pairwise_orders(err).back(); }

struct ManufacturedRun {
  double h = 0.0;
  double sup_error = 0.0;
  SolveReport report;
};

/// f = 0.1 sin(pi x) sin(pi y), g = 0.1 x y (1 - x)(1 - y) on [0,1]^2, forced so
/// that it solves the continuum equation exactly; harmonic initial guess.
inline ManufacturedRun manufactured_run(int n, double beta = 1.0) {
  const GridSpec G = square(0.0, 1.0, n);
  const AnalyticSurface target = surfaces::manufactured();
  const GraphPatch exact = target.sample(G);
  const Forcing F = manufactured_forcing(G, target, beta);
  SolverConfig cfg;
  cfg.beta = beta;
  const SolveResult r = newton_solve(harmonic_extension(exact), cfg, &F);
  ManufacturedRun out;
  out.h = G.hx;
  out.report = r.report;
  out.sup_error = std::max((r.patch.f() - exact.f()).abs().maxCoeff(), (r.patch.g() - exact.g()).abs().maxCoeff());
  return out;
}

struct TestSurface {
  std::string name;
  AnalyticSurface surface;
  GridSpec grid;
};

/// The surfaces every structural property is checked on.
inline std::vector<TestSurface> standard_surfaces(int n = 33) {
  return {
      {"affine", surfaces::affine(0.3, -0.2, 0.5, 0.1), square(-1.0, 1.0, n)},
      {"z2", surfaces::holomorphic_z2(), square(-1.0, 1.0, n)},
      {"z3", surfaces::holomorphic_z3(0.5), square(-1.0, 1.0, n)},
      {"hemisphere", surfaces::hemisphere(1.0), square(-0.5, 0.5, n)},
      {"bump", surfaces::bump(0.3, 0.4), square(-1.0, 1.0, n)},
      {"shear", surfaces::shear(0.3, 0.2), square(-1.0, 1.0, n)},
      {"manufactured", surfaces::manufactured(), square(0.0, 1.0, n)},
  };
}

/// F -> lambda F: grid and heights scaled together.
inline GraphPatch scaled(const GraphPatch& p, double lambda) {
  const GridSpec& G = p.grid();
  GridSpec S = G;
  S.x0 *= lambda;
  S.y0 *= lambda;
  S.hx *= lambda;
  S.hy *= lambda;
  return GraphPatch(S, lambda * p.f(), lambda * p.g());
}

/// Dirichlet data of the twisted shear f = 0.3 y, g = 0.2 x y on [-1,1]^2.
inline AnalyticSurface twisted_shear() { return surfaces::shear(0.3, 0.2); }

inline SolveResult solve_from_boundary(const AnalyticSurface& s, const GridSpec& G, double beta) {
  SolverConfig cfg;
  cfg.beta = beta;
  return newton_solve(harmonic_extension(s.sample(G)), cfg);
}

}  // namespace bsc::testing
