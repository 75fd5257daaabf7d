// femtosim: femtocell association / probabilistic-scheduling experiment runner.
//
//   femtosim run [config.txt] [flags...]   run a configured experiment
//   femtosim reproduce <t1|t2|t3|t4|fig3>  regenerate a bundled study
//
// Flags override config-file values; every output embeds the resolved
// configuration and seed.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "femto/config.hpp"
#include "femto/experiments.hpp"

namespace {

using namespace femto;

void write_file(const std::string& dir, const std::string& name, const std::string& contents) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  std::cout << "wrote " << path << "\n";
}

void print_summary(const BatchResult& result) {
  std::printf("%-5s %14s %14s %12s %10s %10s %12s\n", "alg", "utility", "power_w",
              "efficiency", "gbr_rej", "active", "iterations");
  for (const AlgorithmSummary& s : result.summary) {
    std::printf("%-5s %8.2f+-%-5.2f %8.2f+-%-5.2f %6.2f+-%-5.2f %10.3f %10.2f %7.1f+-%-5.1f\n",
                algorithm_name(s.algorithm), s.utility.mean, s.utility.stddev, s.power_w.mean,
                s.power_w.stddev, s.efficiency.mean, s.efficiency.stddev,
                s.gbr_reject_ratio.mean, s.active_fbs.mean, s.iterations.mean,
                s.iterations.stddev);
  }
}

void run_single(const Config& cfg, const std::string& out_dir, const std::string& prefix) {
  const BatchConfig batch = cfg.to_batch_config();
  const BatchResult result = run_batch(batch);
  write_file(out_dir, prefix + "trace.csv", trace_csv(result, batch));
  write_file(out_dir, prefix + "report.json", report_json(result, batch));
  for (const auto& [panel, contents] : convergence_panels(result, batch)) {
    write_file(out_dir, prefix + "convergence_" + panel + ".csv", contents);
  }
  print_summary(result);
}

void run_sweep(const Config& cfg, const std::string& out_dir, const std::string& prefix) {
  const BatchConfig batch = cfg.to_batch_config();
  const auto sweep = omega_sweep(batch, cfg.omega_values);
  write_file(out_dir, prefix + "sweep_power.csv", sweep_table_csv(sweep, batch, "power_w"));
  write_file(out_dir, prefix + "sweep_utility.csv", sweep_table_csv(sweep, batch, "utility"));
  write_file(out_dir, prefix + "sweep_efficiency.csv",
             sweep_table_csv(sweep, batch, "energy_efficiency"));
  for (const auto& [w, result] : sweep) {
    std::printf("omega = %g\n", w);
    print_summary(result);
  }
}

std::string default_out_dir() {
  const char* env = std::getenv("FEMTOSIM_OUT");
  return env && *env ? env : "out";
}

// Canned study configurations.
Config study_config(const std::string& study, bool fast, std::uint64_t seed) {
  Config cfg;
  cfg.seed = seed;
  cfg.runs = fast ? 10 : 100;
  if (study == "fig3") {
    cfg.scenario.kind = ScenarioSpec::Kind::Simple;
    cfg.algorithms = {Algorithm::Ig, Algorithm::Fig, Algorithm::Sa, Algorithm::La};
    cfg.selection = SelectionOrder::Random;  // reference convergence-speed setup
    cfg.max_iterations = 220;
    return cfg;
  }
  cfg.scenario.kind = ScenarioSpec::Kind::Grid;
  if (study == "t1") {
    // metric comparison: GBR bearers live on the checkerboard circles only
    cfg.scenario.grid.alternate_gbr_mix = true;
    cfg.algorithms = {Algorithm::La, Algorithm::Ig, Algorithm::Fig, Algorithm::Sa};
    return cfg;
  }
  if (study == "t2" || study == "t3" || study == "t4") {
    // weight sweep: populated checkerboard, so cells can actually drain
    cfg.scenario.grid.alternate_circles = true;
    cfg.algorithms = {Algorithm::Ig, Algorithm::Fig, Algorithm::Sa};
    cfg.omega_values = {0.0, 0.5, 1.0, 1.5, 2.0};
    return cfg;
  }
  throw std::invalid_argument("unknown study '" + study + "' (expected t1, t2, t3, t4 or fig3)");
}

int cmd_run(const std::string& config_path, Config cfg, bool validate_only,
            const std::string& dump_path) {
  cfg.validate();
  if (!dump_path.empty()) {
    save_config(cfg, dump_path);
    std::cout << "wrote " << dump_path << "\n";
    return 0;
  }
  if (validate_only) {
    std::cout << (config_path.empty() ? "configuration" : config_path) << ": ok\n";
    return 0;
  }
  if (cfg.omega_values.empty()) {
    run_single(cfg, cfg.output_dir, "");
  } else {
    run_sweep(cfg, cfg.output_dir, "");
  }
  return 0;
}

int cmd_reproduce(const std::string& study, bool fast, std::uint64_t seed,
                  const std::string& out_dir) {
  Config cfg = study_config(study, fast, seed);
  cfg.output_dir = out_dir;
  cfg.validate();
  const BatchConfig batch = cfg.to_batch_config();
  if (study == "fig3") {
    const BatchResult result = run_batch(batch);
    for (const auto& [panel, contents] : convergence_panels(result, batch)) {
      write_file(out_dir, "fig3_" + panel + ".csv", contents);
    }
    write_file(out_dir, "fig3_report.json", report_json(result, batch));
    write_file(out_dir, "fig3_trace.csv", trace_csv(result, batch));
    print_summary(result);
    return 0;
  }
  if (study == "t1") {
    const BatchResult result = run_batch(batch);
    write_file(out_dir, "t1_table.csv", metrics_table_csv(result, batch));
    write_file(out_dir, "t1_report.json", report_json(result, batch));
    write_file(out_dir, "t1_trace.csv", trace_csv(result, batch));
    print_summary(result);
    return 0;
  }
  const auto sweep = omega_sweep(batch, cfg.omega_values);
  const std::string metric = study == "t2"   ? "power_w"
                             : study == "t3" ? "utility"
                                             : "energy_efficiency";
  write_file(out_dir, study + "_table.csv", sweep_table_csv(sweep, batch, metric));
  for (const auto& [w, result] : sweep) {
    std::printf("omega = %g\n", w);
    print_summary(result);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"femtocell association and probabilistic scheduling simulator"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run a configured experiment");
  std::string config_path;
  run->add_option("config", config_path, "configuration file (key value lines)");
  std::string scenario, alg_list, selection, omega_sweep_list, dump_path, out_dir;
  double omega = -1, spacing = -1, range = -1, gbr_demand = -1, non_gbr_cap = -1;
  double sa_beta0 = -1, sa_tau = -1;
  int runs = -1, rows = -1, cols = -1, ues_per_circle = -1, gbr_per_circle = -1;
  int max_iterations = -1, sa_window = -1, jobs = -1;
  long long seed = -1;
  bool alternate = false, alternate_mix = false, validate_only = false;
  run->add_option("--scenario", scenario, "simple, grid, or a topology file path");
  run->add_option("--alg", alg_list, "comma list of ig,fig,sa,la");
  run->add_option("--omega", omega, "power weight");
  run->add_option("--omega-sweep", omega_sweep_list, "comma list of power weights");
  run->add_option("--runs", runs, "independent runs");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--max-iterations", max_iterations, "iteration cap (0 = auto)");
  run->add_option("--selection", selection, "round_robin or random");
  run->add_option("--rows", rows, "grid rows");
  run->add_option("--cols", cols, "grid cols");
  run->add_option("--spacing", spacing, "grid spacing, meters");
  run->add_option("--range", range, "cell range, meters");
  run->add_option("--ues-per-circle", ues_per_circle, "UEs dropped per populated circle");
  run->add_option("--gbr-per-circle", gbr_per_circle, "GBR UEs per populated circle");
  run->add_flag("--alternate-circles", alternate, "populate only the checkerboard circles");
  run->add_flag("--alternate-gbr-mix", alternate_mix,
                "populate every circle, GBR bearers on the checkerboard only");
  run->add_option("--gbr-demand", gbr_demand, "GBR demand, Mbps");
  run->add_option("--non-gbr-cap", non_gbr_cap, "Non-GBR cap, Mbps");
  run->add_option("--sa-beta0", sa_beta0, "annealing schedule base");
  run->add_option("--sa-tau", sa_tau, "annealing schedule time constant");
  run->add_option("--sa-window", sa_window, "trailing metric window");
  run->add_option("--jobs", jobs, "parallel workers (0 = auto)");
  run->add_option("--out", out_dir, "output directory (default $FEMTOSIM_OUT or ./out)");
  run->add_option("--dump-config", dump_path, "write the resolved config and exit");
  run->add_flag("--validate-only", validate_only, "validate the configuration and exit");

  // ---- reproduce ----
  auto* rep = app.add_subcommand("reproduce", "regenerate a bundled study");
  std::string study, rep_out;
  bool fast = false;
  long long rep_seed = 42;
  rep->add_option("study", study, "t1, t2, t3, t4 or fig3")->required();
  rep->add_flag("--fast", fast, "10 runs instead of 100");
  rep->add_option("--seed", rep_seed, "master seed");
  rep->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) {
      return cmd_reproduce(study, fast, static_cast<std::uint64_t>(rep_seed),
                           rep_out.empty() ? default_out_dir() : rep_out);
    }

    femto::Config cfg;
    if (!config_path.empty()) cfg = femto::load_config(config_path);
    if (!scenario.empty()) {
      if (scenario == "simple") cfg.scenario.kind = femto::ScenarioSpec::Kind::Simple;
      else if (scenario == "grid") cfg.scenario.kind = femto::ScenarioSpec::Kind::Grid;
      else {
        cfg.scenario.kind = femto::ScenarioSpec::Kind::File;
        cfg.scenario.path = scenario;
      }
    }
    if (!alg_list.empty()) cfg.algorithms = femto::parse_algorithm_list(alg_list);
    if (omega >= 0) cfg.params.power_weight = omega;
    if (!omega_sweep_list.empty()) cfg.omega_values = femto::parse_double_list(omega_sweep_list);
    if (runs >= 0) cfg.runs = runs;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (max_iterations >= 0) cfg.max_iterations = max_iterations;
    if (!selection.empty()) {
      if (selection == "round_robin") cfg.selection = femto::SelectionOrder::RoundRobin;
      else if (selection == "random") cfg.selection = femto::SelectionOrder::Random;
      else throw std::invalid_argument("unknown selection '" + selection + "'");
    }
    if (rows >= 0) cfg.scenario.grid.rows = rows;
    if (cols >= 0) cfg.scenario.grid.cols = cols;
    if (spacing >= 0) cfg.scenario.grid.spacing_m = spacing;
    if (range >= 0) cfg.scenario.grid.range_m = range;
    if (ues_per_circle >= 0) cfg.scenario.grid.ues_per_circle = ues_per_circle;
    if (gbr_per_circle >= 0) cfg.scenario.grid.gbr_per_circle = gbr_per_circle;
    if (alternate) cfg.scenario.grid.alternate_circles = true;
    if (alternate_mix) cfg.scenario.grid.alternate_gbr_mix = true;
    if (gbr_demand >= 0) cfg.scenario.grid.gbr_demand_mbps = gbr_demand;
    if (non_gbr_cap >= 0) cfg.scenario.grid.non_gbr_cap_mbps = non_gbr_cap;
    if (sa_beta0 >= 0) cfg.sa.beta0 = sa_beta0;
    if (sa_tau >= 0) cfg.sa.tau = sa_tau;
    if (sa_window >= 0) cfg.sa.window = sa_window;
    if (jobs >= 0) cfg.jobs = jobs;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    else if (cfg.output_dir == "out") cfg.output_dir = default_out_dir();

    return cmd_run(config_path, cfg, validate_only, dump_path);
  } catch (const std::exception& e) {
    std::cerr << "femtosim: " << e.what() << "\n";
    return 1;
  }
}
