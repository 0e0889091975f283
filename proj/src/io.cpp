#include "bsc/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace bsc {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  return raw_row(cells);
}

CsvTable& CsvTable::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width does not match header");
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += cells[k];
  }
  rows_.push_back(std::move(line));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t k = 0; k < header_.size(); ++k) {
    if (k) out += ',';
    out += header_[k];
  }
  out += '\n';
  for (const auto& r : rows_) {
    out += r;
    out += '\n';
  }
  return out;
}

std::string mesh_dump(const GraphPatch& patch) {
  const GridSpec& G = patch.grid();
  std::string out = "i,j,x,y,f,g\n";
  out.reserve(out.size() + static_cast<std::size_t>(G.node_count()) * 96);
  for (int j = 0; j < G.ny; ++j)
    for (int i = 0; i < G.nx; ++i) {
      out += std::to_string(i) + ',' + std::to_string(j) + ',' + format_double(G.x(i)) + ',' +
             format_double(G.y(j)) + ',' + format_double(patch.f()(i, j)) + ',' +
             format_double(patch.g()(i, j)) + '\n';
    }
  return out;
}

std::string field_dump(const GridSpec& grid, const std::vector<std::pair<std::string, Field>>& fields) {
  std::string out = "i,j,name,value\n";
  for (const auto& [name, v] : fields) {
    if (v.rows() != grid.nx || v.cols() != grid.ny)
      throw std::logic_error("field '" + name + "' does not match the grid");
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        out += std::to_string(i) + ',' + std::to_string(j) + ',' + name + ',' + format_double(v(i, j)) + '\n';
  }
  return out;
}

GraphPatch parse_mesh(const std::string& text) {
  using CK = ConfigError::Kind;
  std::istringstream in(text);
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || (line != "i,j,x,y,f,g" && line != "i,j,x,y,f,g\r"))
    throw ConfigError(CK::Parse, 1, "mesh header must be 'i,j,x,y,f,g'");
  struct Row {
    int i, j;
    double x, y, f, g;
    int line;
  };
  std::vector<Row> rows;
  int nx = 0, ny = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    Row r{};
    r.line = lineno;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf%c", &r.i, &r.j, &r.x, &r.y, &r.f, &r.g, &tail) < 6 ||
        (tail && tail != '\r'))
      throw ConfigError(CK::Parse, lineno, "expected i,j,x,y,f,g");
    if (r.i < 0 || r.j < 0 || r.i > 4096 || r.j > 4096)
      throw ConfigError(CK::Parse, lineno, "node index out of range");
    if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.f) || !std::isfinite(r.g))
      throw ConfigError(CK::Parse, lineno, "non-finite value");
    nx = std::max(nx, r.i + 1);
    ny = std::max(ny, r.j + 1);
    rows.push_back(r);
  }
  if (nx < 3 || ny < 3) throw ConfigError(CK::Parse, lineno, "mesh needs at least 3 x 3 nodes");
  if (rows.size() != static_cast<std::size_t>(nx) * ny)
    throw ConfigError(CK::Parse, lineno, "mesh does not cover an nx x ny grid exactly once");

  Field f = Field::Constant(nx, ny, std::nan("")), g = f, xs = f, ys = f;
  for (const Row& r : rows) {
    if (!std::isnan(f(r.i, r.j))) throw ConfigError(CK::Parse, r.line, "duplicate node");
    f(r.i, r.j) = r.f;
    g(r.i, r.j) = r.g;
    xs(r.i, r.j) = r.x;
    ys(r.i, r.j) = r.y;
  }
  GridSpec G;
  G.nx = nx;
  G.ny = ny;
  G.x0 = xs(0, 0);
  G.y0 = ys(0, 0);
  G.hx = (xs(nx - 1, 0) - G.x0) / (nx - 1);
  G.hy = (ys(0, ny - 1) - G.y0) / (ny - 1);
  if (!(G.hx > 0.0) || !(G.hy > 0.0)) throw ConfigError(CK::Parse, 0, "mesh coordinates must increase with i and j");
  const double tol = 1e-9 * std::max({1.0, std::abs(G.x0), std::abs(G.y0), G.hx * nx, G.hy * ny});
  for (const Row& r : rows)
    if (std::abs(r.x - G.x(r.i)) > tol || std::abs(r.y - G.y(r.j)) > tol)
      throw ConfigError(CK::Parse, r.line, "mesh is not a uniform grid");
  return GraphPatch(G, std::move(f), std::move(g));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphPatch load_mesh(const std::string& path) { return parse_mesh(read_file(path)); }

std::string iteration_log_csv(const SolveReport& report) {
  CsvTable t({"iter", "res_sup", "res_l2", "min_cos_alpha"});
  for (const auto& h : report.history)
    t.raw_row({std::to_string(h.iter), format_double(h.res_sup), format_double(h.res_l2),
               format_double(h.min_cos_alpha)});
  return t.str();
}

const std::vector<std::string> kDiagnosticsHeader{"beta",     "min_cos_alpha", "lq_mass", "total_A2",
                                                  "total_H2", "sup_A",         "area",    "l_beta",
                                                  "gauss_res", "ealpha_res"};

std::vector<double> diagnostics_row(const DiagnosticsRecord& r) {
  return {r.beta,  r.min_cos_alpha, r.lq_mass, r.total_A2,           r.total_H2,
          r.sup_A, r.area,          r.l_beta,  r.gauss_residual_sup, r.ealpha_residual_sup};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

namespace {

fs::path temp_name(const fs::path& target) {
  return target.parent_path() / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw std::runtime_error("write to '" + p.string() + "' failed");
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = temp_name(target);
  try {
    write_file(tmp, content);
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void ArtifactSet::add(const std::string& name, std::string content) {
  if (name.empty() || name.find('/') != std::string::npos)
    throw std::logic_error("artifact names are plain file names");
  files_[name] = std::move(content);
}

void ArtifactSet::commit(const std::string& dir) const {
  const fs::path root(dir);
  fs::create_directories(root);
  std::vector<fs::path> temps;
  try {
    for (const auto& [name, content] : files_) {
      temps.push_back(temp_name(root / name));
      write_file(temps.back(), content);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
  std::size_t k = 0;
  try {
    for (const auto& [name, content] : files_) {
      fs::rename(temps[k], root / name);
      ++k;
    }
  } catch (...) {
    std::error_code ec;
    for (; k < temps.size(); ++k) fs::remove(temps[k], ec);
    throw;
  }
}

}  // namespace bsc
