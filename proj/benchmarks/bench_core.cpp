#include <benchmark/benchmark.h>

#include "femto/algorithms.hpp"
#include "femto/experiments.hpp"
#include "femto/model.hpp"
#include "femto/oracle.hpp"
#include "femto/rng.hpp"
#include "femto/topology.hpp"

namespace {

using namespace femto;

GridSpec bench_grid(int rows, int cols) {
  GridSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.spacing_m = 10.0;
  spec.alternate_circles = true;
  return spec;
}

// Mid-run profile: one sequential pass over all UEs.
DecisionProfile warm_profile(const Topology& topo, const ModelParams& params) {
  DecisionProfile prof = DecisionProfile::initial(topo.num_ues());
  for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
    prof.decisions[u] = best_response(u, prof, topo, params).decision;
  }
  return prof;
}

void BM_local_profit(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(5, 5), 1);
  const ModelParams params;
  const DecisionProfile prof = warm_profile(topo, params);
  const FbsLoad load = compute_fbs_load(prof, topo);
  const UeIndex u = static_cast<UeIndex>(topo.num_ues() / 2);
  const Decision cand{topo.eligible(u).front(), AccessProbability{2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_profit(u, cand, prof, load, topo, params));
  }
}
BENCHMARK(BM_local_profit);

void BM_global_potential(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(5, 5), 1);
  const ModelParams params;
  const DecisionProfile prof = warm_profile(topo, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(global_potential(prof, topo, params));
  }
}
BENCHMARK(BM_global_potential);

void BM_best_response(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(5, 5), 1);
  const ModelParams params;
  const DecisionProfile prof = warm_profile(topo, params);
  const UeIndex u = static_cast<UeIndex>(topo.num_ues() / 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response(u, prof, topo, params));
  }
}
BENCHMARK(BM_best_response);

void BM_ig_run(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(state.range(0), state.range(0)), 1);
  const ModelParams params;
  RunConfig cfg;
  cfg.algorithm = Algorithm::Ig;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ig_run(topo, params, cfg));
  }
}
BENCHMARK(BM_ig_run)->Arg(3)->Arg(5);

void BM_fig_run(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(state.range(0), state.range(0)), 1);
  const ModelParams params;
  RunConfig cfg;
  cfg.algorithm = Algorithm::Fig;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fig_run(topo, params, cfg));
  }
}
BENCHMARK(BM_fig_run)->Arg(3)->Arg(5);

void BM_greedy_color(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(state.range(0), state.range(0)), 1);
  const ConflictGraph graph = conflict_graph(topo);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_color(graph));
  }
}
BENCHMARK(BM_greedy_color)->Arg(3)->Arg(5)->Arg(8);

void BM_simulate_tiles(benchmark::State& state) {
  const Topology topo = grid_topology(bench_grid(3, 3), 1);
  ModelParams params;
  RunConfig cfg;
  cfg.algorithm = Algorithm::Ig;
  const DecisionProfile prof = ig_run(topo, params, cfg).profile;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_tiles(prof, topo, params, 100000, 5));
  }
}
BENCHMARK(BM_simulate_tiles);

}  // namespace

BENCHMARK_MAIN();
