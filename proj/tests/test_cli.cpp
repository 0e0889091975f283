#include "doctest.h"

#include "bsc/io.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path workdir() {
  static const fs::path p = [] {
    const fs::path d = fs::temp_directory_path() / ("bsc_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

struct Cleanup {
  Cleanup() { workdir(); }
  ~Cleanup() {
    std::error_code ec;
    fs::remove_all(workdir(), ec);
  }
} cleanup;

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(BSC_EXE) + " " + args + " 2>>" + (workdir() / "stderr.log").string();
  const int st = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) out.insert(e.path().filename().string());
  return out;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

json manifest(const fs::path& dir) { return json::parse(bsc::read_file((dir / "manifest.json").string())); }

const char* kShear = R"([grid]
nx = 17
ny = 17
[problem]
boundary = shear(0.3, 0.2)
beta = 1
)";

}  // namespace

TEST_CASE("solve writes the mesh, logs and manifest") {
  const fs::path cfg = write_config("solve.ini", kShear);
  const fs::path out = workdir() / "solve";
  REQUIRE(run("solve --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto files = listing(out);
  for (const char* f : {"mesh.csv", "solve_log.csv", "solve_report.csv", "diagnostics.csv", "fields.csv",
                        "manifest.json"})
    CHECK(files.count(f) == 1);
  const std::string mesh = bsc::read_file((out / "mesh.csv").string());
  CHECK(first_line(mesh) == "i,j,x,y,f,g");
  CHECK(bsc::parse_mesh(mesh).grid().nx == 17);
  CHECK(first_line(bsc::read_file((out / "fields.csv").string())) == "i,j,name,value");
  CHECK(first_line(bsc::read_file((out / "solve_log.csv").string())) == "iter,res_sup,res_l2,min_cos_alpha");
  CHECK(first_line(bsc::read_file((out / "diagnostics.csv").string())) ==
        "beta,min_cos_alpha,lq_mass,total_A2,total_H2,sup_A,area,l_beta,gauss_res,ealpha_res");

  const json m = manifest(out);
  CHECK(m["command"] == "solve");
  CHECK(m["config_sha256"] == bsc::sha256_hex(bsc::read_file(cfg.string())));
  for (const auto& o : m["outputs"])
    CHECK(o["sha256"] == bsc::sha256_hex(bsc::read_file((out / o["file"].get<std::string>()).string())));
}

TEST_CASE("reruns are byte-identical apart from the wall clock") {
  const fs::path cfg = write_config("rerun.ini", kShear);
  const fs::path a = workdir() / "rerun_a", b = workdir() / "rerun_b";
  REQUIRE(run("solve --config " + cfg.string() + " --out " + a.string()) == 0);
  REQUIRE(run("solve --config " + cfg.string() + " --out " + b.string()) == 0);
  REQUIRE(listing(a) == listing(b));
  for (const auto& f : listing(a)) {
    if (f == "manifest.json") continue;
    CAPTURE(f);
    CHECK(bsc::read_file((a / f).string()) == bsc::read_file((b / f).string()));
  }
  json ma = manifest(a), mb = manifest(b);
  ma.erase("wall_clock_seconds");
  mb.erase("wall_clock_seconds");
  CHECK(ma == mb);
}

TEST_CASE("grid and seed overrides") {
  const fs::path cfg = write_config("override.ini", kShear);
  const fs::path out = workdir() / "override";
  REQUIRE(run("diagnose --config " + cfg.string() + " --out " + out.string() + " --grid 9,11 --seed 7") == 0);
  const json m = manifest(out);
  CHECK(m["config"]["seed"] == 7);
  CHECK(m["config"]["grid"]["nx"] == 9);
  CHECK(m["config"]["grid"]["ny"] == 11);
  const std::string f = bsc::read_file((out / "fields.csv").string());
  CHECK(std::count(f.begin(), f.end(), '\n') == 1 + 7 * 9 * 11);
  const std::string st = bsc::read_file((out / "stationarity.csv").string());
  CHECK(st.find(",7,") != std::string::npos);
  CHECK(run("diagnose --config " + cfg.string() + " --out " + out.string() + " --grid 9") == 2);
}

TEST_CASE("invalid input exits 2 and writes nothing") {
  const fs::path out = workdir() / "bad";
  CHECK(run("solve --config " + write_config("bad1.ini", "[grid]\nhx = -1\n").string() + " --out " + out.string()) ==
        2);
  CHECK(run("solve --config " + write_config("bad2.ini", "[grid]\ncolour = red\n").string() + " --out " +
            out.string()) == 2);
  CHECK(run("solve --config " + (workdir() / "missing.ini").string() + " --out " + out.string()) == 2);
  CHECK(run("solve --out " + out.string()) == 2);
  CHECK(run("integrate --config " + write_config("ok.ini", kShear).string()) == 2);
  CHECK(listing(out).empty());
}

TEST_CASE("ball leaving the patch is a contract violation") {
  const fs::path cfg = write_config("mono.ini", R"([grid]
nx = 17
ny = 17
[problem]
boundary = holomorphic_z2
[diagnostics]
radii = 0.5, 5
)");
  const fs::path out = workdir() / "mono";
  CHECK(run("monotonicity --config " + cfg.string() + " --out " + out.string()) == 2);
  CHECK(listing(out).empty());
}

TEST_CASE("monotonicity on the plane") {
  const fs::path cfg = write_config("plane.ini", R"([grid]
nx = 17
ny = 17
[problem]
boundary = affine(0.2, 0.1, -0.3, 0.4)
[diagnostics]
radii = 0.2, 0.3, 0.4
)");
  const fs::path out = workdir() / "plane";
  REQUIRE(run("monotonicity --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string table = bsc::read_file((out / "monotonicity.csv").string());
  CHECK(std::count(table.begin(), table.end(), '\n') == 4);
  CHECK(table.find(",0,") == std::string::npos);  // every pair holds
}

TEST_CASE("rescale") {
  const fs::path cfg = write_config("rescale.ini", R"([grid]
nx = 33
ny = 33
[problem]
boundary = holomorphic_z2
[rescale]
n = 17
half_width = 0.5
)");
  const fs::path out = workdir() / "rescale";
  REQUIRE(run("rescale --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(bsc::parse_mesh(bsc::read_file((out / "rescaled_mesh.csv").string())).grid().nx == 17);

  const fs::path flat = write_config("rescale_flat.ini", "[problem]\nboundary = affine\n");
  const fs::path out2 = workdir() / "rescale_flat";
  CHECK(run("rescale --config " + flat.string() + " --out " + out2.string()) == 2);
  CHECK(listing(out2).empty());
}

TEST_CASE("continue writes one record per beta") {
  const fs::path cfg = write_config("cont.ini", R"([grid]
nx = 17
ny = 17
[problem]
boundary = shear(0.3, 0.2)
beta_schedule = 0:1:0.5
)");
  const fs::path out = workdir() / "cont";
  REQUIRE(run("continue --config " + cfg.string() + " --out " + out.string()) == 0);
  const std::string d = bsc::read_file((out / "diagnostics.csv").string());
  CHECK(std::count(d.begin(), d.end(), '\n') == 4);
  for (const char* f : {"solve_log_000.csv", "solve_log_002.csv", "continuation.csv", "moser.csv", "mesh.csv"})
    CHECK(listing(out).count(f) == 1);
}

TEST_CASE("continuation underflow keeps the completed records") {
  const fs::path cfg = write_config("under.ini", R"([grid]
nx = 17
ny = 17
[problem]
boundary = shear(0.3, 0.2)
beta_schedule = 0, 8
min_step = 1
[solver]
max_newton_iters = 2
)");
  const fs::path out = workdir() / "under";
  CHECK(run("continue --config " + cfg.string() + " --out " + out.string()) == 2);
  const auto files = listing(out);
  CHECK(files.count("manifest.json") == 1);
  const std::string d = bsc::read_file((out / "diagnostics.csv").string());
  CHECK(std::count(d.begin(), d.end(), '\n') >= 2);
  CHECK(d.find("\n0,") != std::string::npos);
  const json m = manifest(out);
  CHECK(m["stages"].back()["status"] == "StepUnderflow");
}
