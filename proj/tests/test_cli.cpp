// Drives the installed command-line surface end to end: flag parsing, config
// files, validation diagnostics, output files, and byte-stable reruns.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FEMTO_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("cli: tiny run writes the expected artifacts") {
  TempDir dir("femtosim_cli_run");
  const int rc = run_cli("run --scenario simple --alg ig,la --runs 2 --seed 7 --out " + dir.str());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "trace.csv"));
  CHECK(fs::exists(dir.path / "report.json"));
  CHECK(fs::exists(dir.path / "convergence_utility.csv"));
  CHECK(fs::exists(dir.path / "convergence_power.csv"));
  CHECK(fs::exists(dir.path / "convergence_efficiency.csv"));
  const std::string report = slurp(dir.path / "report.json");
  CHECK(report.find("\"seed\": \"7\"") != std::string::npos);
  CHECK(report.find("\"ig\"") != std::string::npos);
  CHECK(report.find("\"la\"") != std::string::npos);
}

TEST_CASE("cli: identical seeds give byte-identical traces") {
  TempDir a("femtosim_cli_det_a");
  TempDir b("femtosim_cli_det_b");
  const std::string common =
      "run --scenario grid --rows 2 --cols 2 --spacing 10 --alg ig,sa --runs 2 "
      "--max-iterations 80 --seed 99 --out ";
  REQUIRE(run_cli(common + a.str()) == 0);
  REQUIRE(run_cli(common + b.str()) == 0);
  CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));
  CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));
}

TEST_CASE("cli: validate-only accepts a good config and flags a bad one") {
  TempDir dir("femtosim_cli_validate");
  {
    std::ofstream good(dir.path / "good.txt");
    good << "scenario simple\nruns 3\nalgorithms ig\n";
  }
  {
    std::ofstream bad(dir.path / "bad.txt");
    bad << "scenario simple\nruns 3\nbogus 1\n";
  }
  CHECK(run_cli("run --validate-only " + (dir.path / "good.txt").string()) == 0);
  CHECK(run_cli("run --validate-only " + (dir.path / "bad.txt").string()) != 0);
  // invariant violations are also rejected
  {
    std::ofstream bad2(dir.path / "bad2.txt");
    bad2 << "scenario simple\nc2 500\n";
  }
  CHECK(run_cli("run --validate-only " + (dir.path / "bad2.txt").string()) != 0);
  CHECK(run_cli("run --validate-only /nonexistent.txt") != 0);
}

TEST_CASE("cli: dumped config reloads to the identical resolved state") {
  TempDir dir("femtosim_cli_dump");
  const fs::path first = dir.path / "resolved.txt";
  const fs::path second = dir.path / "resolved2.txt";
  REQUIRE(run_cli("run --scenario grid --rows 3 --cols 2 --alternate-circles --omega 1.5 "
                  "--alg fig --runs 5 --seed 3 --dump-config " +
                  first.string()) == 0);
  REQUIRE(run_cli("run " + first.string() + " --dump-config " + second.string()) == 0);
  CHECK(slurp(first) == slurp(second));
  const std::string text = slurp(first);
  CHECK(text.find("grid_alternate 1") != std::string::npos);
  CHECK(text.find("omega 1.5") != std::string::npos);
}

TEST_CASE("cli: flags override config file values") {
  TempDir dir("femtosim_cli_override");
  {
    std::ofstream cfg(dir.path / "base.txt");
    cfg << "scenario simple\nruns 50\nalgorithms sa,la\nseed 1\n";
  }
  const fs::path dumped = dir.path / "resolved.txt";
  REQUIRE(run_cli("run " + (dir.path / "base.txt").string() + " --runs 4 --alg ig --dump-config " +
                  dumped.string()) == 0);
  const std::string text = slurp(dumped);
  CHECK(text.find("runs 4\n") != std::string::npos);
  CHECK(text.find("algorithms ig\n") != std::string::npos);
  CHECK(text.find("seed 1\n") != std::string::npos);  // untouched value survives
}

TEST_CASE("cli: reproduce fig3 --fast emits the three panels") {
  TempDir dir("femtosim_cli_fig3");
  REQUIRE(run_cli("reproduce fig3 --fast --out " + dir.str()) == 0);
  CHECK(fs::exists(dir.path / "fig3_utility.csv"));
  CHECK(fs::exists(dir.path / "fig3_power.csv"));
  CHECK(fs::exists(dir.path / "fig3_efficiency.csv"));
  CHECK(fs::exists(dir.path / "fig3_report.json"));
  const std::string panel = slurp(dir.path / "fig3_utility.csv");
  CHECK(panel.find("iteration,ig,fig,sa,la") != std::string::npos);
}

TEST_CASE("cli: reproduce rejects unknown studies") {
  CHECK(run_cli("reproduce t9") != 0);
  CHECK(run_cli("bogus-subcommand") != 0);
}

TEST_CASE("cli: FEMTOSIM_OUT supplies the default output directory") {
  TempDir dir("femtosim_cli_envout");
  const std::string cmd = "FEMTOSIM_OUT=" + dir.str() + " " + std::string(FEMTO_CLI_BIN) +
                          " run --scenario simple --alg la --runs 1 >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(dir.path / "report.json"));
}
