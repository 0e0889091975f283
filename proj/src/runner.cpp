#include "bsc/runner.hpp"

#include "bsc/rescale.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

namespace bsc {

using ordered_json = nlohmann::ordered_json;

std::optional<Command> parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "continue") return Command::Continue;
  if (name == "diagnose") return Command::Diagnose;
  if (name == "rescale") return Command::Rescale;
  if (name == "monotonicity") return Command::Monotonicity;
  return std::nullopt;
}

const char* to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Continue: return "continue";
    case Command::Diagnose: return "diagnose";
    case Command::Rescale: return "rescale";
    case Command::Monotonicity: return "monotonicity";
  }
  return "unknown";
}

namespace {

const char* to_string(InitKind k) {
  switch (k) {
    case InitKind::Harmonic: return "harmonic";
    case InitKind::Zero: return "zero";
    case InitKind::Exact: return "exact";
  }
  return "unknown";
}

GraphPatch exact_patch(const RunConfig& c) {
  if (!c.boundary.mesh_path.empty()) return load_mesh(c.boundary.mesh_path);
  c.grid.validate();
  return surfaces::by_name(c.boundary.family, c.boundary.params).sample(c.grid);
}

}  // namespace

GraphPatch initial_patch(const RunConfig& config) {
  GraphPatch p = exact_patch(config);
  switch (config.init) {
    case InitKind::Exact: return p;
    case InitKind::Harmonic: return harmonic_extension(p);
    case InitKind::Zero: {
      const GridSpec& G = p.grid();
      GraphPatch z(G, Field::Zero(G.nx, G.ny), Field::Zero(G.nx, G.ny));
      z.set_boundary_from(p);
      return z;
    }
  }
  return p;
}

GraphPatch input_surface(const RunConfig& config) { return exact_patch(config); }

Vec4 default_center(const GraphPatch& patch) {
  return patch.point(patch.grid().nx / 2, patch.grid().ny / 2);
}

namespace {

ordered_json config_echo(const RunConfig& c) {
  ordered_json j;
  j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"x0", c.grid.x0},
               {"y0", c.grid.y0}, {"hx", c.grid.hx}, {"hy", c.grid.hy}};
  j["boundary"] = {{"family", c.boundary.family}, {"params", c.boundary.params}, {"mesh", c.boundary.mesh_path}};
  j["init"] = to_string(c.init);
  j["beta"] = c.beta;
  j["beta_schedule"] = c.schedule.beta_values;
  j["adaptive"] = c.schedule.adaptive;
  j["min_step"] = c.schedule.min_step;
  const SolverConfig& s = c.solver;
  j["solver"] = {{"tol_residual", s.tol_residual},
                 {"max_newton_iters", s.max_newton_iters},
                 {"damping", s.damping},
                 {"max_backtracks", s.max_backtracks},
                 {"jacobian_fd_eps", s.jacobian_fd_eps},
                 {"cos_floor", s.cos_floor},
                 {"linear_solver", s.linear_solver == LinearSolverKind::Dense ? "dense" : "sparse_lu"}};
  const DiagnosticsConfig& d = c.diagnostics;
  ordered_json center = nullptr;
  if (d.center) center = std::vector<double>(d.center->data(), d.center->data() + 4);
  j["diagnostics"] = {{"q", d.q},
                      {"radii", d.radii},
                      {"center", center},
                      {"epsilons", d.epsilons},
                      {"concentration_radius", d.concentration_radius},
                      {"sobolev_bound", d.sobolev_bound}};
  j["rescale"] = {{"n", c.rescale.n}, {"half_width", c.rescale.half_width}};
  j["seed"] = c.seed;
  return j;
}

std::string bool_cell(bool b) { return b ? "1" : "0"; }

class Run {
 public:
  Run(Command cmd, const RunConfig& cfg, std::ostream& log)
      : cmd_(cmd), cfg_(cfg), log_(log), start_(std::chrono::steady_clock::now()) {}

  void stage(const std::string& name, const std::string& status, const std::string& detail = {}) {
    stages_.push_back({{"name", name}, {"status", status}, {"detail", detail}});
    log_ << "[" << name << "] " << status << (detail.empty() ? "" : ": " + detail) << "\n";
  }

  void add(const std::string& name, std::string content) { art_.add(name, std::move(content)); }

  void publish() {
    ordered_json m;
    m["program"] = "bsc";
    m["command"] = to_string(cmd_);
    m["versions"] = {{"bsc", kVersion},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                   "." + std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__}};
    m["config"] = config_echo(cfg_);
    m["config_sha256"] = sha256_hex(cfg_.source);
    if (!cfg_.boundary.mesh_path.empty()) m["input_mesh_sha256"] = sha256_hex(read_file(cfg_.boundary.mesh_path));
    m["stages"] = stages_;
    ordered_json outs = ordered_json::array();
    for (const auto& [name, content] : art_.files())
      outs.push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
    m["outputs"] = outs;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    art_.add("manifest.json", m.dump(2) + "\n");
    art_.commit(cfg_.output_dir);
    log_ << "wrote " << art_.files().size() << " files to " << cfg_.output_dir << "\n";
  }

 private:
  Command cmd_;
  const RunConfig& cfg_;
  std::ostream& log_;
  std::chrono::steady_clock::time_point start_;
  ArtifactSet art_;
  ordered_json stages_ = ordered_json::array();
};

void log_history(std::ostream& log, const SolveReport& rep) {
  log << "iter,res_sup,res_l2,min_cos_alpha\n";
  for (const auto& h : rep.history)
    log << h.iter << ',' << format_double(h.res_sup) << ',' << format_double(h.res_l2) << ','
        << format_double(h.min_cos_alpha) << "\n";
}

int run_solve(Run& run, const RunConfig& cfg, std::ostream& log) {
  SolverConfig sc = cfg.solver;
  sc.beta = cfg.beta;
  const SolveResult res = newton_solve(initial_patch(cfg), sc);
  log_history(log, res.report);
  if (!res.report.converged) {
    log << "solve failed: " << to_string(res.report.failure) << ": " << res.report.message << "\n";
    if (res.report.failure == SolveFailure::CosFloorViolated)
      throw ContractError(ContractError::Kind::CosFloorViolated, res.report.message);
    return 1;
  }
  run.stage("solve", "converged", std::to_string(res.report.iterations) + " iterations");

  const SurfaceFields fields(res.patch);
  const ResidualField rf = residual_field(fields, sc.beta);
  CsvTable rep({"beta", "iterations", "final_sup", "final_l2", "converged", "failure"});
  rep.raw_row({format_double(sc.beta), std::to_string(res.report.iterations), format_double(res.report.final_sup),
               format_double(res.report.final_l2), bool_cell(res.report.converged),
               to_string(res.report.failure)});
  CsvTable diag(kDiagnosticsHeader);
  diag.row(diagnostics_row(diagnostics_record(fields, sc.beta, cfg.diagnostics.q)));
  run.stage("diagnostics", "ok");

  run.add("mesh.csv", mesh_dump(res.patch));
  run.add("solve_log.csv", iteration_log_csv(res.report));
  run.add("solve_report.csv", rep.str());
  run.add("diagnostics.csv", diag.str());
  run.add("fields.csv", field_dump(res.patch.grid(), {{"cos_alpha", fields.cos_alpha_field()},
                                                      {"r3", rf.r3},
                                                      {"r4", rf.r4}}));
  run.publish();
  return 0;
}

void add_continuation(Run& run, const std::vector<ContinuationStep>& steps, double q) {
  CsvTable diag(kDiagnosticsHeader);
  CsvTable moser({"beta", "sup_inv_cos", "lq_mass", "ratio"});
  CsvTable summary({"beta", "iterations", "final_sup", "final_l2", "converged"});
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    diag.row(diagnostics_row(s.diagnostics));
    const MoserReport m = moser_report(SurfaceFields(s.patch), q);
    moser.row({s.beta, m.sup_inv_cos, m.lq_mass, m.ratio});
    summary.raw_row({format_double(s.beta), std::to_string(s.report.iterations), format_double(s.report.final_sup),
                     format_double(s.report.final_l2), bool_cell(s.report.converged)});
    char name[40];
    std::snprintf(name, sizeof name, "solve_log_%03zu.csv", k);
    run.add(name, iteration_log_csv(s.report));
  }
  run.add("diagnostics.csv", diag.str());
  run.add("moser.csv", moser.str());
  run.add("continuation.csv", summary.str());
  if (!steps.empty()) run.add("mesh.csv", mesh_dump(steps.back().patch));
}

int run_continue(Run& run, const RunConfig& cfg, std::ostream& log) {
  ContinuationSchedule sched = cfg.schedule;
  sched.beta_values = cfg.beta_values();
  std::vector<ContinuationStep> steps;
  try {
    steps = continuation_run(initial_patch(cfg), sched, cfg.solver, cfg.diagnostics.q);
  } catch (const StepUnderflow& e) {
    log << "continuation stopped: " << e.what() << "\n";
    const auto& done = e.completed();
    run.stage("continuation", "StepUnderflow",
              e.last_good_beta() ? "last good beta " + format_double(*e.last_good_beta()) : "no beta converged");
    add_continuation(run, done, cfg.diagnostics.q);
    run.publish();
    return 2;
  }
  for (const auto& s : steps) log << "beta " << format_double(s.beta) << ": " << s.report.iterations
                                  << " iterations, min cos " << format_double(s.diagnostics.min_cos_alpha) << "\n";
  run.stage("continuation", "completed", std::to_string(steps.size()) + " steps");
  add_continuation(run, steps, cfg.diagnostics.q);
  run.publish();
  return 0;
}

int run_diagnose(Run& run, const RunConfig& cfg) {
  const GraphPatch patch = input_surface(cfg);
  const SurfaceFields fields(patch);
  fields.require_symplectic("diagnose");
  const DiagnosticsConfig& d = cfg.diagnostics;

  CsvTable diag(kDiagnosticsHeader);
  for (double beta : cfg.beta_values()) diag.row(diagnostics_row(diagnostics_record(fields, beta, d.q)));
  run.add("diagnostics.csv", diag.str());

  const GridSpec& G = patch.grid();
  Field A2(G.nx, G.ny), H2(G.nx, G.ny), K(G.nx, G.ny);
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      A2(i, j) = fields.at(i, j).ext.normA2;
      H2(i, j) = fields.at(i, j).ext.normH2();
      K(i, j) = fields.at(i, j).ext.K;
    }
  const ResidualField rf = residual_field(fields, cfg.beta);
  const EalphaResult ea = ealpha_residual(fields, cfg.beta);
  run.add("fields.csv", field_dump(G, {{"cos_alpha", fields.cos_alpha_field()},
                                       {"normA2", A2},
                                       {"normH2", H2},
                                       {"K", K},
                                       {"r3", rf.r3},
                                       {"r4", rf.r4},
                                       {"ealpha", ea.value}}));
  run.stage("fields", "ok", ea.residual_warning ? "surface is not critical; ealpha is informative only" : "");

  const SobolevReport sob = sobolev_ratio(fields, standard_bump_family(G), d.sobolev_bound);
  CsvTable sobt({"bump", "ratio"});
  for (std::size_t k = 0; k < sob.ratios.size(); ++k) sobt.raw_row({std::to_string(k), format_double(sob.ratios[k])});
  run.add("sobolev.csv", sobt.str());
  run.stage("sobolev", sob.within_bound ? "within_bound" : "bound_exceeded", "sup " + format_double(sob.sup_ratio));

  const MoserReport m = moser_report(fields, d.q);
  CsvTable mt({"sup_inv_cos", "lq_mass", "ratio"});
  mt.row({m.sup_inv_cos, m.lq_mass, m.ratio});
  run.add("moser.csv", mt.str());

  CsvTable ct({"epsilon", "radius", "i", "j", "mass"});
  for (double eps : d.epsilons) {
    const ConcentrationReport cr = concentration_map(fields, d.concentration_radius, eps);
    for (const auto& n : cr.flagged)
      ct.raw_row({format_double(eps), format_double(d.concentration_radius), std::to_string(n.i),
                  std::to_string(n.j), format_double(n.mass)});
  }
  run.add("concentration.csv", ct.str());

  CsvTable st({"beta", "seed", "dL_dt"});
  st.row({cfg.beta, static_cast<double>(cfg.seed), energy_stationarity_test(patch, cfg.beta, cfg.seed)});
  run.add("stationarity.csv", st.str());
  run.stage("diagnose", "ok");
  run.publish();
  return 0;
}

int run_rescale(Run& run, const RunConfig& cfg, std::ostream& log) {
  const GraphPatch patch = input_surface(cfg);
  const SurfaceFields fields(patch);
  const MaxCurvature mc = find_max_A(fields);
  const RescaleSpec spec = make_rescale_spec(fields, mc.i, mc.j, cfg.rescale.n, cfg.rescale.half_width);
  const RescaleOutcome out = rescale_to_graph(patch, spec);
  const SurfaceFields after(out.patch);
  const int ci = out.patch.grid().nx / 2, cj = out.patch.grid().ny / 2;
  const double before_deficit = holomorphy_deficit(fields);
  const double after_deficit = holomorphy_deficit(after);
  CsvTable t({"ci", "cj", "lambda", "deficit_before", "deficit_after", "center_normA", "non_symplectic_center"});
  t.raw_row({std::to_string(mc.i), std::to_string(mc.j), format_double(mc.lambda), format_double(before_deficit),
             format_double(after_deficit), format_double(after.at(ci, cj).normA()),
             bool_cell(out.non_symplectic_center)});
  log << "deficit before=" << format_double(before_deficit) << " after=" << format_double(after_deficit)
      << (out.non_symplectic_center ? " (non-symplectic centre, comparison disabled)" : "") << "\n";
  run.add("rescaled_mesh.csv", mesh_dump(out.patch));
  run.add("rescale.csv", t.str());
  run.stage("rescale", out.non_symplectic_center ? "NonSymplecticCenter" : "ok");
  run.publish();
  return 0;
}

int run_monotonicity(Run& run, const RunConfig& cfg) {
  const GraphPatch patch = input_surface(cfg);
  const SurfaceFields fields(patch);
  const Vec4 center = cfg.diagnostics.center.value_or(default_center(patch));
  const auto& radii = cfg.diagnostics.radii;
  const auto stats = ball_stats(fields, center, radii);

  // one halving of h for the quadrature tolerance
  std::vector<BallStat> other;
  const GridSpec& G = patch.grid();
  if (G.nx % 2 == 1 && G.ny % 2 == 1 && G.nx >= 5 && G.ny >= 5) {
    other = ball_stats(SurfaceFields(coarsen(patch)), center, radii);
  } else if (cfg.boundary.mesh_path.empty()) {
    const GridSpec fine = GridSpec::over(G.x0, G.x_max(), G.y0, G.y_max(), 2 * G.nx - 1, 2 * G.ny - 1);
    other = ball_stats(SurfaceFields(surfaces::by_name(cfg.boundary.family, cfg.boundary.params).sample(fine)),
                       center, radii);
  } else {
    throw ContractError(ContractError::Kind::OutOfRange, "mesh input needs odd nx, ny to estimate tol_quad");
  }
  const double tol = refinement_tolerance(stats, other);
  const MonotonicityReport rep = monotonicity_check(stats, tol);

  CsvTable bt({"radius", "area_in_ball", "ratio", "annulus_term", "h_term", "perp_in_ball", "H2_in_ball"});
  for (const auto& s : stats)
    bt.row({s.radius, s.area_in_ball, s.ratio, s.annulus_term, s.h_term, s.perp_in_ball, s.H2_in_ball});
  CsvTable pt({"s1", "s2", "annulus_term", "h_term", "slack", "lhs_simon", "rhs_simon", "tol_quad", "monotone_ok",
               "simon_ok"});
  for (const auto& p : rep.pairs)
    pt.raw_row({format_double(p.s1), format_double(p.s2), format_double(p.annulus_term), format_double(p.h_term),
                format_double(p.slack), format_double(p.lhs_simon), format_double(p.rhs_simon), format_double(tol),
                bool_cell(p.monotone_ok), bool_cell(p.simon_ok)});
  run.add("balls.csv", bt.str());
  run.add("monotonicity.csv", pt.str());
  run.stage("monotonicity", rep.all_ok ? "holds" : "violated",
            "min slack " + format_double(rep.min_slack()) + ", tol_quad " + format_double(tol));
  run.publish();
  return 0;
}

}  // namespace

int dispatch(Command command, const RunConfig& config, std::ostream& log) {
  Run run(command, config, log);
  try {
    switch (command) {
      case Command::Solve: return run_solve(run, config, log);
      case Command::Continue: return run_continue(run, config, log);
      case Command::Diagnose: return run_diagnose(run, config);
      case Command::Rescale: return run_rescale(run, config, log);
      case Command::Monotonicity: return run_monotonicity(run, config);
    }
  } catch (const ContractError& e) {
    log << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    log << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace bsc
