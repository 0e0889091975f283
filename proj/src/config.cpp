#include "bsc/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace bsc {

namespace {

using CK = ConfigError::Kind;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& s, int line) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw ConfigError(CK::Parse, line, "expected a number, got '" + t + "'");
  if (!std::isfinite(v)) throw ConfigError(CK::Range, line, "value must be finite");
  return v;
}

long long to_int(const std::string& s, int line) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw ConfigError(CK::Parse, line, "expected an integer, got '" + t + "'");
  return v;
}

bool to_bool(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(CK::Parse, line, "expected true/false, got '" + t + "'");
}

std::vector<double> to_list(const std::string& s, int line) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, line));
  if (out.empty()) throw ConfigError(CK::Parse, line, "empty list");
  return out;
}

void require(bool ok, int line, const std::string& what) {
  if (!ok) throw ConfigError(CK::Range, line, what);
}

}  // namespace

BoundarySpec parse_boundary(const std::string& text, int line) {
  BoundarySpec b;
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) {
    b.family = t;
  } else {
    if (t.back() != ')') throw ConfigError(CK::Parse, line, "unbalanced parentheses in '" + t + "'");
    b.family = trim(t.substr(0, open));
    const std::string inner = trim(t.substr(open + 1, t.size() - open - 2));
    if (!inner.empty()) b.params = to_list(inner, line);
  }
  if (b.family.empty()) throw ConfigError(CK::Parse, line, "empty boundary family");
  try {
    (void)surfaces::by_name(b.family, b.params);
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), line, e.what());
  }
  return b;
}

std::vector<double> parse_beta_schedule(const std::string& text, int line) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(to_double(item, line));
    if (parts.size() != 3) throw ConfigError(CK::Parse, line, "schedule must be start:stop:step");
    const double a = parts[0], b = parts[1], step = parts[2];
    require(step > 0.0 && b >= a, line, "schedule needs step > 0 and stop >= start");
    const long long n = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    require(n < 100000, line, "schedule too long");
    for (long long k = 0; k <= n; ++k) out.push_back(a + k * step);
  } else {
    out = to_list(t, line);
  }
  for (double v : out) require(v >= 0.0, line, "beta values must be >= 0");
  return out;
}

std::vector<double> RunConfig::beta_values() const {
  return schedule.beta_values.empty() ? std::vector<double>{beta} : schedule.beta_values;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  c.source = text;

  // grid geometry is resolved after all keys are read
  std::optional<double> xmin, xmax, ymin, ymax, hx, hy;
  std::optional<long long> nx, ny;

  using Handler = std::function<void(const std::string&, int)>;
  std::map<std::string, std::map<std::string, Handler>> table;
  auto positive = [](double v, int line, const char* name) {
    require(v > 0.0, line, std::string(name) + " must be > 0");
    return v;
  };

  table["grid"]["nx"] = [&](const std::string& v, int l) { nx = to_int(v, l); require(*nx >= 3, l, "nx must be >= 3"); };
  table["grid"]["ny"] = [&](const std::string& v, int l) { ny = to_int(v, l); require(*ny >= 3, l, "ny must be >= 3"); };
  table["grid"]["hx"] = [&](const std::string& v, int l) { hx = positive(to_double(v, l), l, "hx"); };
  table["grid"]["hy"] = [&](const std::string& v, int l) { hy = positive(to_double(v, l), l, "hy"); };
  table["grid"]["x0"] = [&](const std::string& v, int l) { xmin = to_double(v, l); };
  table["grid"]["y0"] = [&](const std::string& v, int l) { ymin = to_double(v, l); };
  table["domain"]["xmin"] = [&](const std::string& v, int l) { xmin = to_double(v, l); };
  table["domain"]["ymin"] = [&](const std::string& v, int l) { ymin = to_double(v, l); };
  table["domain"]["xmax"] = [&](const std::string& v, int l) { xmax = to_double(v, l); };
  table["domain"]["ymax"] = [&](const std::string& v, int l) { ymax = to_double(v, l); };

  table["problem"]["boundary"] = [&](const std::string& v, int l) { c.boundary = parse_boundary(unquote(v), l); };
  table["problem"]["mesh"] = [&](const std::string& v, int l) {
    c.boundary.mesh_path = unquote(trim(v));
    require(!c.boundary.mesh_path.empty(), l, "mesh path is empty");
  };
  table["problem"]["init"] = [&](const std::string& v, int l) {
    const std::string t = unquote(trim(v));
    if (t == "harmonic") c.init = InitKind::Harmonic;
    else if (t == "zero") c.init = InitKind::Zero;
    else if (t == "exact") c.init = InitKind::Exact;
    else throw ConfigError(CK::Range, l, "init must be harmonic, zero or exact");
  };
  table["problem"]["beta"] = [&](const std::string& v, int l) {
    c.beta = to_double(v, l);
    require(c.beta >= 0.0, l, "beta must be >= 0");
  };
  table["problem"]["beta_schedule"] = [&](const std::string& v, int l) {
    c.schedule.beta_values = parse_beta_schedule(unquote(v), l);
  };
  table["problem"]["adaptive"] = [&](const std::string& v, int l) { c.schedule.adaptive = to_bool(v, l); };
  table["problem"]["min_step"] = [&](const std::string& v, int l) {
    c.schedule.min_step = positive(to_double(v, l), l, "min_step");
  };

  SolverConfig& s = c.solver;
  table["solver"]["tol_residual"] = [&](const std::string& v, int l) { s.tol_residual = positive(to_double(v, l), l, "tol_residual"); };
  table["solver"]["max_newton_iters"] = [&](const std::string& v, int l) {
    const long long n = to_int(v, l);
    require(n > 0 && n < 100000, l, "max_newton_iters must be in [1, 99999]");
    s.max_newton_iters = static_cast<int>(n);
  };
  table["solver"]["damping"] = [&](const std::string& v, int l) {
    s.damping = to_double(v, l);
    require(s.damping > 0.0 && s.damping < 1.0, l, "damping must lie in (0,1)");
  };
  table["solver"]["max_backtracks"] = [&](const std::string& v, int l) {
    const long long n = to_int(v, l);
    require(n > 0 && n < 1000, l, "max_backtracks must be in [1, 999]");
    s.max_backtracks = static_cast<int>(n);
  };
  table["solver"]["jacobian_fd_eps"] = [&](const std::string& v, int l) { s.jacobian_fd_eps = positive(to_double(v, l), l, "jacobian_fd_eps"); };
  table["solver"]["cos_floor"] = [&](const std::string& v, int l) {
    s.cos_floor = to_double(v, l);
    require(s.cos_floor > 0.0 && s.cos_floor < 1.0, l, "cos_floor must lie in (0,1)");
  };
  table["solver"]["linear_solver"] = [&](const std::string& v, int l) {
    const std::string t = unquote(trim(v));
    if (t == "sparse_lu") s.linear_solver = LinearSolverKind::SparseLU;
    else if (t == "dense") s.linear_solver = LinearSolverKind::Dense;
    else throw ConfigError(CK::Range, l, "linear_solver must be sparse_lu or dense");
  };

  DiagnosticsConfig& d = c.diagnostics;
  table["diagnostics"]["q"] = [&](const std::string& v, int l) { d.q = positive(to_double(v, l), l, "q"); };
  table["diagnostics"]["radii"] = [&](const std::string& v, int l) {
    d.radii = to_list(v, l);
    for (std::size_t k = 0; k < d.radii.size(); ++k)
      require(d.radii[k] > 0.0 && (k == 0 || d.radii[k] > d.radii[k - 1]), l,
              "radii must be positive and strictly ascending");
  };
  table["diagnostics"]["center"] = [&](const std::string& v, int l) {
    const auto p = to_list(v, l);
    require(p.size() == 4, l, "center needs 4 coordinates");
    d.center = Vec4(p[0], p[1], p[2], p[3]);
  };
  table["diagnostics"]["epsilons"] = [&](const std::string& v, int l) {
    d.epsilons = to_list(v, l);
    for (double e : d.epsilons) require(e > 0.0, l, "epsilons must be > 0");
  };
  table["diagnostics"]["concentration_radius"] = [&](const std::string& v, int l) {
    d.concentration_radius = positive(to_double(v, l), l, "concentration_radius");
  };
  table["diagnostics"]["sobolev_bound"] = [&](const std::string& v, int l) {
    d.sobolev_bound = positive(to_double(v, l), l, "sobolev_bound");
  };

  table["rescale"]["n"] = [&](const std::string& v, int l) {
    const long long n = to_int(v, l);
    require(n >= 3 && n <= 4097, l, "rescale n must be in [3, 4097]");
    c.rescale.n = static_cast<int>(n);
  };
  table["rescale"]["half_width"] = [&](const std::string& v, int l) {
    c.rescale.half_width = positive(to_double(v, l), l, "half_width");
  };

  table["output"]["dir"] = [&](const std::string& v, int l) {
    c.output_dir = unquote(trim(v));
    require(!c.output_dir.empty(), l, "output dir is empty");
  };
  table["output"]["seed"] = [&](const std::string& v, int l) {
    const long long n = to_int(v, l);
    require(n >= 0, l, "seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(n);
  };

  std::istringstream in(text);
  std::string raw, section;
  std::set<std::string> seen;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string t = raw;
    const auto hash = t.find('#');
    if (hash != std::string::npos) t = t.substr(0, hash);
    t = trim(t);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(CK::Parse, line, "malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!table.count(section)) throw ConfigError(CK::UnknownKey, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(CK::Parse, line, "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (section.empty()) throw ConfigError(CK::Parse, line, "key '" + key + "' outside any section");
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(CK::UnknownKey, line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(CK::Parse, line, "duplicate key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ConfigError(CK::Parse, line, "missing value for '" + key + "'");
    it->second(value, line);
  }

  GridSpec& g = c.grid;
  if (nx) g.nx = static_cast<int>(*nx);
  if (ny) g.ny = static_cast<int>(*ny);
  require(g.nx <= 4097 && g.ny <= 4097, 0, "grid larger than 4097 nodes per side");
  g.x0 = xmin.value_or(-1.0);
  g.y0 = ymin.value_or(-1.0);
  if (hx && xmax) throw ConfigError(CK::Range, 0, "give either hx or xmax, not both");
  if (hy && ymax) throw ConfigError(CK::Range, 0, "give either hy or ymax, not both");
  if (hx) {
    g.hx = *hx;
  } else {
    const double hi = xmax.value_or(1.0);
    require(hi > g.x0, 0, "xmax must exceed xmin");
    g.hx = (hi - g.x0) / (g.nx - 1);
  }
  if (hy) {
    g.hy = *hy;
  } else {
    const double hi = ymax.value_or(1.0);
    require(hi > g.y0, 0, "ymax must exceed ymin");
    g.hy = (hi - g.y0) / (g.ny - 1);
  }
  return c;
}

void override_grid(RunConfig& config, int nx, int ny) {
  require(nx >= 3 && ny >= 3 && nx <= 4097 && ny <= 4097, 0, "--grid needs 3 <= NX, NY <= 4097");
  GridSpec& g = config.grid;
  const double xmax = g.x_max(), ymax = g.y_max();
  g = GridSpec::over(g.x0, xmax, g.y0, ymax, nx, ny);
}

}  // namespace bsc
