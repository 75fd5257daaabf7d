#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "femto/algorithms.hpp"
#include "femto/topology.hpp"
#include "femto/types.hpp"

namespace femto {

struct MetricsSnapshot {
  double total_utility = 0.0;
  double power_w = 0.0;
  double energy_efficiency = 0.0;  // total_utility / power_w
  double gbr_reject_ratio = 0.0;   // 0 when there are no GBR UEs
  double non_gbr_utility = 0.0;
  double active_fbs = 0.0;
};

MetricsSnapshot compute_metrics(const DecisionProfile& profile, const Topology& topo,
                                const ModelParams& params);

struct ScenarioSpec {
  enum class Kind { Simple, Grid, File };
  Kind kind = Kind::Simple;
  GridSpec grid;
  std::string path;  // for Kind::File
};

/// Materializes a scenario. Random scenarios (the grid) resample UE drops
/// from the seed; fixed scenarios ignore it.
Topology make_topology(const ScenarioSpec& scenario, std::uint64_t seed);

struct BatchConfig {
  ScenarioSpec scenario;
  std::vector<Algorithm> algorithms{Algorithm::Ig};
  ModelParams params;
  int runs = 1;
  std::uint64_t seed = 0;
  int max_iterations = 0;  // 0: per-algorithm default
  SelectionOrder selection = SelectionOrder::RoundRobin;
  SaSchedule sa;
  int jobs = 0;  // worker threads; 0: min(runs, hardware)
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample convention (n - 1); 0 for a single run
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Ig;
  MetricStats utility, power_w, efficiency, gbr_reject_ratio, non_gbr_utility, active_fbs;
  MetricStats iterations;
  int converged_runs = 0;
};

struct RunRecord {
  int run = 0;
  Algorithm algorithm = Algorithm::Ig;
  MetricsSnapshot metrics;  // converged values, or trailing-window means
  int iterations = 0;
  bool converged = false;
};

struct RunTrace {
  int run = 0;
  Algorithm algorithm = Algorithm::Ig;
  IterationTrace trace;
};

struct BatchResult {
  std::vector<AlgorithmSummary> summary;  // one per configured algorithm
  std::vector<RunRecord> records;         // runs x algorithms, run-major
  std::vector<RunTrace> traces;
};

/// Runs every configured algorithm on every seeded instance. Each run r
/// derives its own seed from the master; random scenarios are resampled per
/// run and shared by all algorithms of that run, which also share the
/// all-unassociated initial state. Runs execute in parallel; aggregation is
/// a deterministic reduction in run order.
///
/// Captured metrics: converged profile values for the terminating
/// algorithms, trailing-window trace means for the annealed sampler.
BatchResult run_batch(const BatchConfig& cfg);

/// run_batch once per weight value, with the scenario seed fixed across
/// weights so sweeps compare like against like.
std::vector<std::pair<double, BatchResult>> omega_sweep(const BatchConfig& base,
                                                        const std::vector<double>& omegas);

MetricStats aggregate(const std::vector<double>& values);

// ---- output rendering ------------------------------------------------------

/// Key-value lines of the resolved configuration; embedded at the top of
/// every artifact so outputs are self-describing.
std::vector<std::pair<std::string, std::string>> config_echo(const BatchConfig& cfg);

/// CSV with columns run, algorithm, iteration, utility, power_w, efficiency,
/// potential, active_fbs; config echo in leading '#' comments.
std::string trace_csv(const BatchResult& result, const BatchConfig& cfg);

/// JSON document carrying the config echo plus per-algorithm statistics.
std::string report_json(const BatchResult& result, const BatchConfig& cfg);

/// Per-iteration metric means across runs (constant-extended past each run's
/// convergence), one CSV per panel: utility, power, efficiency.
std::vector<std::pair<std::string, std::string>> convergence_panels(const BatchResult& result,
                                                                    const BatchConfig& cfg);

/// Metric rows x algorithm columns, cells "mean+-std".
std::string metrics_table_csv(const BatchResult& result, const BatchConfig& cfg);

/// Weight rows x algorithm columns for one metric of a sweep.
std::string sweep_table_csv(const std::vector<std::pair<double, BatchResult>>& sweep,
                            const BatchConfig& cfg, const std::string& metric);

}  // namespace femto
