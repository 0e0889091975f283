#pragma once

#include "bsc/config.hpp"
#include "bsc/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace bsc {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Solve, Continue, Diagnose, Rescale, Monotonicity };

std::optional<Command> parse_command(const std::string& name);
const char* to_string(Command c);

/// Dirichlet data plus initial interior for solve/continue.
GraphPatch initial_patch(const RunConfig& config);

/// The surface examined by diagnose, rescale and monotonicity: the mesh file,
/// or the analytic family sampled at every node.
GraphPatch input_surface(const RunConfig& config);

/// Middle-node surface point, the default ball centre.
Vec4 default_center(const GraphPatch& patch);

/// Runs one command and publishes its artifacts under config.output_dir.
/// Returns the process exit status: 0 success, 2 contract violation
/// (including invalid input), 1 anything else. Progress and errors go to `log`.
int dispatch(Command command, const RunConfig& config, std::ostream& log);

}  // namespace bsc
