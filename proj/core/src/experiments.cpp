#include "femto/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "femto/rng.hpp"
#include "json.hpp"

namespace femto {

namespace {

constexpr std::uint64_t kRunStream = 0x52u;
constexpr std::uint64_t kTopologyStream = 0x54u;
constexpr std::uint64_t kAlgorithmStream = 0x41u;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_cell(const MetricStats& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.2f+-%.2f", s.mean, s.stddev);
  return buf;
}

}  // namespace

MetricsSnapshot compute_metrics(const DecisionProfile& profile, const Topology& topo,
                                const ModelParams& params) {
  MetricsSnapshot m;
  const FbsLoad load = compute_fbs_load(profile, topo);
  int gbr_total = 0;
  int gbr_rejected = 0;
  for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
    const UeNode& node = topo.ue(u);
    const double r = throughput(u, profile, load, topo, params);
    if (node.bearer.is_gbr()) {
      ++gbr_total;
      if (r < node.bearer.rate_mbps) ++gbr_rejected;
      m.total_utility += utility_gbr(r, node.bearer.rate_mbps, params.gbr_utility);
    } else {
      const double f = utility_non_gbr(r, node.bearer.rate_mbps, params.non_gbr_utility);
      m.total_utility += f;
      m.non_gbr_utility += f;
    }
  }
  int active = 0;
  for (FbsIndex b = 0; b < static_cast<FbsIndex>(topo.num_fbs()); ++b) {
    const bool on = load.assoc_count[b] > 0;
    m.power_w += params.idle_power_w + (on ? params.active_power_w : 0.0) +
                 params.transmit_power_w * (load.gross_num[b] / double(params.denominator()));
    active += on ? 1 : 0;
  }
  m.energy_efficiency = m.total_utility / m.power_w;
  m.gbr_reject_ratio = gbr_total > 0 ? static_cast<double>(gbr_rejected) / gbr_total : 0.0;
  m.active_fbs = active;
  return m;
}

Topology make_topology(const ScenarioSpec& scenario, std::uint64_t seed) {
  switch (scenario.kind) {
    case ScenarioSpec::Kind::Simple: return simple_topology();
    case ScenarioSpec::Kind::Grid: return grid_topology(scenario.grid, seed);
    case ScenarioSpec::Kind::File: return load_topology(scenario.path);
  }
  throw std::invalid_argument("make_topology: unknown scenario kind");
}

MetricStats aggregate(const std::vector<double>& values) {
  MetricStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (values.size() - 1));
  }
  return s;
}

namespace {

MetricsSnapshot trailing_window_metrics(const RunResult& run, const Topology& topo,
                                        const ModelParams& params, int window) {
  // Mean of each per-iteration metric over the last `window` rows.
  const auto& rows = run.trace.rows;
  const std::size_t take = std::min<std::size_t>(window > 0 ? window : 1, rows.size());
  MetricsSnapshot acc;
  // gbr_reject_ratio and non_gbr_utility are not in the trace rows; take
  // them from the final profile, averaging only the traced metrics.
  MetricsSnapshot last = compute_metrics(run.profile, topo, params);
  double u = 0, p = 0, e = 0, a = 0;
  for (std::size_t i = rows.size() - take; i < rows.size(); ++i) {
    u += rows[i].utility;
    p += rows[i].power_w;
    e += rows[i].efficiency;
    a += rows[i].active_fbs;
  }
  acc.total_utility = u / take;
  acc.power_w = p / take;
  acc.energy_efficiency = e / take;
  acc.active_fbs = a / take;
  acc.gbr_reject_ratio = last.gbr_reject_ratio;
  acc.non_gbr_utility = last.non_gbr_utility;
  return acc;
}

struct RunOutput {
  std::vector<RunRecord> records;
  std::vector<RunTrace> traces;
};

RunOutput execute_run(const BatchConfig& cfg, int run_index) {
  const Rng master(cfg.seed);
  const Rng run_rng = master.split(kRunStream + run_index);
  const std::uint64_t topo_seed = run_rng.split(kTopologyStream).seed();

  const Topology topo = make_topology(cfg.scenario, topo_seed);
  RunOutput out;
  for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
    RunConfig rc;
    rc.algorithm = cfg.algorithms[ai];
    rc.max_iterations = cfg.max_iterations;
    rc.seed = run_rng.split(kAlgorithmStream + ai).seed();
    rc.selection = cfg.selection;
    rc.sa = cfg.sa;

    RunResult res = run_algorithm(topo, cfg.params, rc);

    RunRecord rec;
    rec.run = run_index;
    rec.algorithm = rc.algorithm;
    rec.iterations = res.iterations;
    rec.converged = res.converged;
    rec.metrics = rc.algorithm == Algorithm::Sa
                      ? trailing_window_metrics(res, topo, cfg.params, cfg.sa.window)
                      : compute_metrics(res.profile, topo, cfg.params);
    out.records.push_back(rec);
    out.traces.push_back(RunTrace{run_index, rc.algorithm, std::move(res.trace)});
  }
  return out;
}

}  // namespace

BatchResult run_batch(const BatchConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("run_batch: runs must be >= 1");
  if (cfg.algorithms.empty()) throw std::invalid_argument("run_batch: no algorithms");
  cfg.params.validate();

  std::vector<RunOutput> outputs(cfg.runs);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::min<unsigned>(hw, cfg.runs));

  std::atomic<int> next{0};
  std::mutex failure_mutex;
  std::string failure;
  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= cfg.runs) return;
      try {
        outputs[r] = execute_run(cfg, r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure.empty())
          failure = "run " + std::to_string(r) + " failed: " + e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!failure.empty()) throw std::runtime_error("run_batch: " + failure);

  BatchResult result;
  for (int r = 0; r < cfg.runs; ++r) {
    for (auto& rec : outputs[r].records) result.records.push_back(rec);
    for (auto& tr : outputs[r].traces) result.traces.push_back(std::move(tr));
  }

  for (Algorithm a : cfg.algorithms) {
    std::vector<double> utility, power, eff, reject, non_gbr, active, iters;
    int converged = 0;
    for (const RunRecord& rec : result.records) {
      if (rec.algorithm != a) continue;
      utility.push_back(rec.metrics.total_utility);
      power.push_back(rec.metrics.power_w);
      eff.push_back(rec.metrics.energy_efficiency);
      reject.push_back(rec.metrics.gbr_reject_ratio);
      non_gbr.push_back(rec.metrics.non_gbr_utility);
      active.push_back(rec.metrics.active_fbs);
      iters.push_back(rec.iterations);
      converged += rec.converged ? 1 : 0;
    }
    AlgorithmSummary s;
    s.algorithm = a;
    s.utility = aggregate(utility);
    s.power_w = aggregate(power);
    s.efficiency = aggregate(eff);
    s.gbr_reject_ratio = aggregate(reject);
    s.non_gbr_utility = aggregate(non_gbr);
    s.active_fbs = aggregate(active);
    s.iterations = aggregate(iters);
    s.converged_runs = converged;
    result.summary.push_back(s);
  }
  return result;
}

std::vector<std::pair<double, BatchResult>> omega_sweep(const BatchConfig& base,
                                                        const std::vector<double>& omegas) {
  if (omegas.empty()) throw std::invalid_argument("omega_sweep: empty weight list");
  std::vector<std::pair<double, BatchResult>> out;
  for (double w : omegas) {
    BatchConfig cfg = base;
    cfg.params.power_weight = w;
    out.emplace_back(w, run_batch(cfg));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> config_echo(const BatchConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  switch (cfg.scenario.kind) {
    case ScenarioSpec::Kind::Simple: kv.emplace_back("scenario", "simple"); break;
    case ScenarioSpec::Kind::Grid: kv.emplace_back("scenario", "grid"); break;
    case ScenarioSpec::Kind::File: kv.emplace_back("scenario", "file"); break;
  }
  if (cfg.scenario.kind == ScenarioSpec::Kind::File) kv.emplace_back("file", cfg.scenario.path);
  if (cfg.scenario.kind == ScenarioSpec::Kind::Grid) {
    const GridSpec& g = cfg.scenario.grid;
    kv.emplace_back("grid_rows", std::to_string(g.rows));
    kv.emplace_back("grid_cols", std::to_string(g.cols));
    kv.emplace_back("grid_spacing_m", fmt(g.spacing_m));
    kv.emplace_back("grid_range_m", fmt(g.range_m));
    kv.emplace_back("grid_ues_per_circle", std::to_string(g.ues_per_circle));
    kv.emplace_back("grid_gbr_per_circle", std::to_string(g.gbr_per_circle));
    kv.emplace_back("grid_alternate", g.alternate_circles ? "1" : "0");
    kv.emplace_back("grid_alternate_gbr_mix", g.alternate_gbr_mix ? "1" : "0");
    kv.emplace_back("gbr_demand_mbps", fmt(g.gbr_demand_mbps));
    kv.emplace_back("non_gbr_cap_mbps", fmt(g.non_gbr_cap_mbps));
  }
  std::string algs;
  for (Algorithm a : cfg.algorithms) {
    if (!algs.empty()) algs += ",";
    algs += algorithm_name(a);
  }
  kv.emplace_back("algorithms", algs);
  kv.emplace_back("runs", std::to_string(cfg.runs));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("max_iterations", std::to_string(cfg.max_iterations));
  kv.emplace_back("selection",
                  cfg.selection == SelectionOrder::RoundRobin ? "round_robin" : "random");
  kv.emplace_back("sa_beta0", fmt(cfg.sa.beta0));
  kv.emplace_back("sa_tau", fmt(cfg.sa.tau));
  kv.emplace_back("sa_window", std::to_string(cfg.sa.window));
  const ModelParams& p = cfg.params;
  kv.emplace_back("full_rate_mbps", fmt(p.full_rate_mbps));
  kv.emplace_back("levels", std::to_string(p.probability_levels));
  kv.emplace_back("c1", fmt(p.gbr_utility));
  kv.emplace_back("c2", fmt(p.non_gbr_utility));
  kv.emplace_back("c3", fmt(p.penalty_slope));
  kv.emplace_back("e1", fmt(p.idle_power_w));
  kv.emplace_back("e2", fmt(p.active_power_w));
  kv.emplace_back("e3", fmt(p.transmit_power_w));
  kv.emplace_back("omega", fmt(p.power_weight));
  return kv;
}

std::string trace_csv(const BatchResult& result, const BatchConfig& cfg) {
  std::ostringstream out;
  for (const auto& [k, v] : config_echo(cfg)) out << "# " << k << " " << v << "\n";
  out << "run,algorithm,iteration,utility,power_w,efficiency,potential,active_fbs\n";
  for (const RunTrace& rt : result.traces) {
    for (const TraceRow& row : rt.trace.rows) {
      out << rt.run << ',' << algorithm_name(rt.algorithm) << ',' << row.iteration << ','
          << fmt(row.utility) << ',' << fmt(row.power_w) << ',' << fmt(row.efficiency) << ','
          << fmt(row.potential) << ',' << row.active_fbs << "\n";
    }
  }
  return out.str();
}

std::string report_json(const BatchResult& result, const BatchConfig& cfg) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json conf;
  for (const auto& [k, v] : config_echo(cfg)) conf[k] = v;
  doc["config"] = conf;
  nlohmann::ordered_json algs;
  auto stats = [](const MetricStats& s) {
    return nlohmann::ordered_json{{"mean", s.mean}, {"stddev", s.stddev}};
  };
  for (const AlgorithmSummary& s : result.summary) {
    nlohmann::ordered_json a;
    a["utility"] = stats(s.utility);
    a["gbr_reject_ratio"] = stats(s.gbr_reject_ratio);
    a["non_gbr_utility"] = stats(s.non_gbr_utility);
    a["power_w"] = stats(s.power_w);
    a["energy_efficiency"] = stats(s.efficiency);
    a["active_fbs"] = stats(s.active_fbs);
    a["iterations"] = stats(s.iterations);
    a["converged_runs"] = s.converged_runs;
    algs[algorithm_name(s.algorithm)] = a;
  }
  doc["algorithms"] = algs;
  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> convergence_panels(const BatchResult& result,
                                                                    const BatchConfig& cfg) {
  // Mean metric value per iteration index, averaged over runs; a finished
  // run holds its last value, matching how convergence curves are read.
  struct Panel {
    const char* name;
    double TraceRow::*field;
  };
  const Panel panels[] = {{"utility", &TraceRow::utility},
                          {"power", &TraceRow::power_w},
                          {"efficiency", &TraceRow::efficiency}};

  std::vector<std::pair<std::string, std::string>> files;
  for (const Panel& panel : panels) {
    std::size_t longest = 0;
    for (const RunTrace& rt : result.traces) longest = std::max(longest, rt.trace.rows.size());
    std::ostringstream out;
    for (const auto& [k, v] : config_echo(cfg)) out << "# " << k << " " << v << "\n";
    out << "iteration";
    for (Algorithm a : cfg.algorithms) out << ',' << algorithm_name(a);
    out << "\n";
    for (std::size_t i = 0; i < longest; ++i) {
      out << (i + 1);
      for (Algorithm a : cfg.algorithms) {
        double sum = 0.0;
        int count = 0;
        for (const RunTrace& rt : result.traces) {
          if (rt.algorithm != a || rt.trace.rows.empty()) continue;
          const auto idx = std::min(i, rt.trace.rows.size() - 1);
          sum += rt.trace.rows[idx].*(panel.field);
          ++count;
        }
        out << ',' << (count > 0 ? fmt(sum / count) : "");
      }
      out << "\n";
    }
    files.emplace_back(panel.name, out.str());
  }
  return files;
}

std::string metrics_table_csv(const BatchResult& result, const BatchConfig& cfg) {
  std::ostringstream out;
  for (const auto& [k, v] : config_echo(cfg)) out << "# " << k << " " << v << "\n";
  out << "metric";
  for (const AlgorithmSummary& s : result.summary) out << ',' << algorithm_name(s.algorithm);
  out << "\n";
  auto row = [&](const std::string& name, MetricStats AlgorithmSummary::*field) {
    out << name;
    for (const AlgorithmSummary& s : result.summary) out << ',' << fmt_cell(s.*field);
    out << "\n";
  };
  row("utility", &AlgorithmSummary::utility);
  row("gbr_reject_ratio", &AlgorithmSummary::gbr_reject_ratio);
  row("non_gbr_utility", &AlgorithmSummary::non_gbr_utility);
  row("power_w", &AlgorithmSummary::power_w);
  row("energy_efficiency", &AlgorithmSummary::efficiency);
  return out.str();
}

std::string sweep_table_csv(const std::vector<std::pair<double, BatchResult>>& sweep,
                            const BatchConfig& cfg, const std::string& metric) {
  MetricStats AlgorithmSummary::*field = nullptr;
  if (metric == "power_w") field = &AlgorithmSummary::power_w;
  else if (metric == "utility") field = &AlgorithmSummary::utility;
  else if (metric == "energy_efficiency") field = &AlgorithmSummary::efficiency;
  else throw std::invalid_argument("sweep_table_csv: unknown metric " + metric);

  std::ostringstream out;
  for (const auto& [k, v] : config_echo(cfg)) out << "# " << k << " " << v << "\n";
  out << "omega";
  for (Algorithm a : cfg.algorithms) out << ',' << algorithm_name(a);
  out << "\n";
  for (const auto& [w, result] : sweep) {
    out << fmt(w);
    for (Algorithm a : cfg.algorithms) {
      for (const AlgorithmSummary& s : result.summary) {
        if (s.algorithm == a) out << ',' << fmt_cell(s.*field);
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace femto
