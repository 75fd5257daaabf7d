#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "femto/model.hpp"
#include "femto/topology.hpp"
#include "femto/types.hpp"

namespace femto {

enum class Algorithm { Ig, Fig, Sa, La };

Algorithm algorithm_from_name(const std::string& name);  // "ig", "fig", "sa", "la"
const char* algorithm_name(Algorithm a);

enum class SelectionOrder { RoundRobin, Random };

/// Inverse-temperature schedule for the annealed sampler:
/// beta_t = beta0 * (1 + t / tau). `window` is the trailing span over which
/// reported metrics are averaged, since the sampler keeps oscillating.
struct SaSchedule {
  double beta0 = 0.05;
  double tau = 50.0;
  int window = 100;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::Ig;
  /// Cap on trace rows (UE updates, or color rounds / sweeps for the
  /// synchronous algorithms). 0 picks a size-derived default.
  int max_iterations = 0;
  std::uint64_t seed = 0;
  SelectionOrder selection = SelectionOrder::RoundRobin;
  SaSchedule sa;
};

struct TraceRow {
  int iteration = 0;  // 1-based
  double utility = 0.0;
  double power_w = 0.0;
  double efficiency = 0.0;
  double potential = 0.0;
  int active_fbs = 0;
  int changes = 0;  // decisions changed at this iteration
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  /// Rows making up one full pass: |U| for the sequential algorithms, the
  /// number of color classes for the synchronized one, 1 per sweep otherwise.
  int rows_per_pass = 0;
};

struct RunResult {
  DecisionProfile profile;
  IterationTrace trace;
  bool converged = false;
  int iterations = 0;  // == trace.rows.size()
};

/// Maximizer of the local profit over every (eligible FBS, access level)
/// candidate. Ties keep the current decision when it attains the maximum,
/// otherwise resolve to the lowest FBS id, then the lowest access level.
/// `improved` is set only when the maximum strictly exceeds the current
/// decision's profit.
struct BestResponse {
  Decision decision;
  double profit = 0.0;
  bool improved = false;
};

BestResponse best_response(UeIndex u, const DecisionProfile& profile, const Topology& topo,
                           const ModelParams& params);

/// Sequential best-response dynamics from the all-unassociated start. One UE
/// updates per iteration (round-robin by id, or seeded-uniform when
/// configured); stops once a full pass leaves every decision unchanged.
RunResult ig_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg);

/// Color-synchronized best-response dynamics: UEs sharing a conflict-graph
/// color are mutually outside each other's two-tier neighbourhood, so each
/// round one whole color class updates simultaneously against the previous
/// snapshot. Stops once a full color cycle changes nothing.
RunResult fig_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg);

/// Annealed log-linear sampler: the scheduled UE draws its next decision with
/// probability proportional to exp(beta_t * profit). Never stops early.
RunResult sa_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg);

/// Load-aware baseline: each UE joins its least-loaded eligible FBS
/// (one-shot, by id), then per-FBS scheduling sweeps assign GBR UEs the
/// cheapest access level that meets their demand under current interference
/// and split the remaining budget equally among Non-GBR UEs, iterated to a
/// fixed point. Never sleeps an FBS that holds an association.
RunResult la_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg);

RunResult run_algorithm(const Topology& topo, const ModelParams& params, const RunConfig& cfg);

struct Deviation {
  UeIndex ue = 0;
  Decision better;
  double gain = 0.0;
};

struct EquilibriumReport {
  bool is_equilibrium = false;
  std::vector<Deviation> deviations;  // best improving move per unstable UE
};

/// True iff no UE can strictly raise its local profit unilaterally.
/// Requires a fully associated profile.
EquilibriumReport equilibrium_check(const DecisionProfile& profile, const Topology& topo,
                                    const ModelParams& params);

/// Trace-row metrics for an arbitrary profile (shared by all runners).
TraceRow evaluate_trace_row(int iteration, const DecisionProfile& profile, const Topology& topo,
                            const ModelParams& params);

}  // namespace femto
