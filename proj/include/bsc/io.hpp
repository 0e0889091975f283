#pragma once

#include "bsc/diagnostics.hpp"
#include "bsc/solver.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bsc {

/// printf("%.17g"): shortest form that still round-trips every double.
std::string format_double(double v);

/// Comma-separated table with a single header line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(const std::vector<double>& values);
  /// Mixed row; numbers must already be formatted.
  CsvTable& raw_row(const std::vector<std::string>& cells);

  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

/// "i,j,x,y,f,g", one row per node, i fastest.
std::string mesh_dump(const GraphPatch& patch);

/// "i,j,name,value", fields in the given order, i fastest within each.
std::string field_dump(const GridSpec& grid, const std::vector<std::pair<std::string, Field>>& fields);

/// Inverse of mesh_dump. The rows must cover a uniform grid exactly once;
/// throws ConfigError(Parse) with the offending line otherwise.
GraphPatch parse_mesh(const std::string& text);
GraphPatch load_mesh(const std::string& path);

std::string iteration_log_csv(const SolveReport& report);

extern const std::vector<std::string> kDiagnosticsHeader;
std::vector<double> diagnostics_row(const DiagnosticsRecord& r);

std::string sha256_hex(const std::string& bytes);

std::string read_file(const std::string& path);

/// Files staged in memory and published together: each is written to a
/// temporary name in the target directory and renamed into place. Nothing is
/// left behind when a write fails.
class ArtifactSet {
 public:
  void add(const std::string& name, std::string content);
  bool empty() const { return files_.empty(); }
  const std::map<std::string, std::string>& files() const { return files_; }

  /// Creates `dir` if needed. Throws std::runtime_error on I/O failure.
  void commit(const std::string& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

/// Writes one file by temp + rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace bsc
