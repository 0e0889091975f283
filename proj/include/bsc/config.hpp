#pragma once

#include "bsc/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bsc {

/// Dirichlet data: a named analytic family, or a mesh dump to read (f, g) from.
struct BoundarySpec {
  std::string family = "affine";
  std::vector<double> params;
  std::string mesh_path;  // non-empty overrides the family
};

/// "shear(0.3)" -> {"shear", {0.3}}; a bare name has no parameters.
BoundarySpec parse_boundary(const std::string& text, int line = 0);

enum class InitKind { Harmonic, Zero, Exact };

struct DiagnosticsConfig {
  double q = 5.0;
  std::vector<double> radii{0.1, 0.2, 0.4};
  std::optional<Vec4> center;  // default: the surface point over the middle node
  std::vector<double> epsilons{0.5, 1.0, 2.0};
  double concentration_radius = 0.25;
  double sobolev_bound = 10.0;
};

struct RescaleConfig {
  int n = 33;
  double half_width = 1.0;
};

struct RunConfig {
  GridSpec grid;
  BoundarySpec boundary;
  InitKind init = InitKind::Harmonic;
  double beta = 1.0;
  ContinuationSchedule schedule;  // empty beta_values: {beta}
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  RescaleConfig rescale;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::string source;  // text the config was parsed from

  std::vector<double> beta_values() const;
};

/// INI-style text: "[section]" headers, "key = value" lines, '#' comments.
/// Unknown sections or keys, duplicates and unparsable values throw ConfigError
/// carrying the line number.
RunConfig parse_config(const std::string& text);

/// "a:b:step" -> a, a + step, ..., b (inclusive within step * 1e-9), or a
/// comma-separated list.
std::vector<double> parse_beta_schedule(const std::string& text, int line = 0);

/// Applies "--grid NX,NY": keeps the domain, changes the resolution.
void override_grid(RunConfig& config, int nx, int ny);

}  // namespace bsc
