// bsc: solve, continue and inspect beta-symplectic critical graphs in C^2.
#include "bsc/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"beta-symplectic critical surfaces: solver and diagnostics"};
  app.set_version_flag("--version", bsc::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir, grid;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"solve", "continue", "diagnose", "rescale", "monotonicity"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "random seed (overrides [output] seed)");
    sub->add_option("--grid", grid, "NX,NY resolution override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  bsc::RunConfig config;
  try {
    config = bsc::parse_config(bsc::read_file(config_path));
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.seed = *seed;
    if (!grid.empty()) {
      int nx = 0, ny = 0;
      char tail = 0;
      if (std::sscanf(grid.c_str(), "%d,%d%c", &nx, &ny, &tail) != 2)
        throw bsc::ConfigError(bsc::ConfigError::Kind::Parse, 0, "--grid expects NX,NY");
      bsc::override_grid(config, nx, ny);
    }
  } catch (const bsc::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return bsc::dispatch(*bsc::parse_command(name), config, std::cerr);
}
