#include "femto/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "femto/rng.hpp"

namespace femto {

namespace {

constexpr std::uint64_t kSelectionStream = 0x11;
constexpr std::uint64_t kSamplerStream = 0x22;

int default_iteration_cap(const Topology& topo, Algorithm alg) {
  const int n = static_cast<int>(topo.num_ues());
  switch (alg) {
    case Algorithm::Ig:
    case Algorithm::Fig:
      return 10 * n;
    case Algorithm::Sa:
      return 40 * n;
    case Algorithm::La:
      return 200;
  }
  return 10 * n;
}

double current_profit(UeIndex u, const DecisionProfile& profile, const FbsLoad& load,
                      const Topology& topo, const ModelParams& params) {
  return local_profit(u, profile.decisions[u], profile, load, topo, params);
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "ig") return Algorithm::Ig;
  if (name == "fig") return Algorithm::Fig;
  if (name == "sa") return Algorithm::Sa;
  if (name == "la") return Algorithm::La;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected ig, fig, sa or la)");
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Ig: return "ig";
    case Algorithm::Fig: return "fig";
    case Algorithm::Sa: return "sa";
    case Algorithm::La: return "la";
  }
  return "?";
}

TraceRow evaluate_trace_row(int iteration, const DecisionProfile& profile, const Topology& topo,
                            const ModelParams& params) {
  TraceRow row;
  row.iteration = iteration;
  const FbsLoad load = compute_fbs_load(profile, topo);
  double utility = 0.0;
  for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
    const double r = throughput(u, profile, load, topo, params);
    const UeNode& node = topo.ue(u);
    utility += node.bearer.is_gbr()
                   ? utility_gbr(r, node.bearer.rate_mbps, params.gbr_utility)
                   : utility_non_gbr(r, node.bearer.rate_mbps, params.non_gbr_utility);
  }
  double power = 0.0;
  double penalties = 0.0;
  int active = 0;
  const double den = params.denominator();
  for (FbsIndex b = 0; b < static_cast<FbsIndex>(topo.num_fbs()); ++b) {
    const bool on = load.assoc_count[b] > 0;
    const double pb = load.gross_num[b] / den;
    power += params.idle_power_w + (on ? params.active_power_w : 0.0) +
             params.transmit_power_w * pb;
    penalties += penalty(pb - 1.0, params.penalty_slope);
    active += on ? 1 : 0;
  }
  row.utility = utility;
  row.power_w = power;
  row.efficiency = utility / power;
  row.potential = utility - params.power_weight * power + penalties;
  row.active_fbs = active;
  return row;
}

BestResponse best_response(UeIndex u, const DecisionProfile& profile, const Topology& topo,
                           const ModelParams& params) {
  if (u < 0 || static_cast<std::size_t>(u) >= topo.num_ues())
    throw std::out_of_range("best_response: unknown UE index " + std::to_string(u));
  const FbsLoad load = compute_fbs_load(profile, topo);

  const Decision current = profile.decisions[u];
  const double profit_now = current_profit(u, profile, load, topo, params);

  Decision best;
  double best_profit = -std::numeric_limits<double>::infinity();
  for (FbsIndex b : topo.eligible(u)) {
    for (std::int32_t k = 0; k < params.probability_levels; ++k) {
      const Decision cand{b, AccessProbability{k}};
      const double p = local_profit(u, cand, profile, load, topo, params);
      if (p > best_profit) {
        best = cand;
        best_profit = p;
      }
    }
  }

  BestResponse out;
  if (current.associated() && profit_now >= best_profit) {
    out.decision = current;  // tie (or already optimal) keeps the current move
    out.profit = profit_now;
    out.improved = false;
  } else {
    out.decision = best;
    out.profit = best_profit;
    out.improved = best_profit > profit_now;
  }
  return out;
}

RunResult ig_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::Ig)
    throw std::invalid_argument("ig_run: config is for a different algorithm");
  params.validate();
  const int num_ues = static_cast<int>(topo.num_ues());
  const int cap = cfg.max_iterations > 0 ? cfg.max_iterations
                                         : default_iteration_cap(topo, Algorithm::Ig);

  RunResult res;
  res.profile = DecisionProfile::initial(num_ues);
  res.trace.rows_per_pass = num_ues;
  Rng pick = Rng(cfg.seed).split(kSelectionStream);

  // Converged once every UE's decision has been verified as a best response
  // with no change anywhere in between. For round-robin selection this is
  // the usual quiet full pass; for random selection the quiet streak must
  // also cover every distinct UE.
  std::vector<char> verified(num_ues, 0);
  int verified_count = 0;
  for (int it = 0; it < cap; ++it) {
    const UeIndex u = cfg.selection == SelectionOrder::RoundRobin
                          ? static_cast<UeIndex>(it % num_ues)
                          : static_cast<UeIndex>(pick.next_below(num_ues));
    const BestResponse br = best_response(u, res.profile, topo, params);
    const bool changed = !(br.decision == res.profile.decisions[u]);
    res.profile.decisions[u] = br.decision;
    if (changed) {
      std::fill(verified.begin(), verified.end(), 0);
      verified[u] = 1;  // the mover now sits at its best response
      verified_count = 1;
    } else if (!verified[u]) {
      verified[u] = 1;
      ++verified_count;
    }

    TraceRow row = evaluate_trace_row(it + 1, res.profile, topo, params);
    row.changes = changed ? 1 : 0;
    res.trace.rows.push_back(row);

    if (verified_count == num_ues) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<int>(res.trace.rows.size());
  return res;
}

RunResult fig_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::Fig)
    throw std::invalid_argument("fig_run: config is for a different algorithm");
  params.validate();
  const int num_ues = static_cast<int>(topo.num_ues());

  const Coloring coloring = greedy_color(conflict_graph(topo));
  std::vector<int> palette(coloring.color.begin(), coloring.color.end());
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
  std::vector<std::vector<UeIndex>> classes(palette.size());
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
    const auto slot = std::lower_bound(palette.begin(), palette.end(), coloring.color[u]);
    classes[slot - palette.begin()].push_back(u);
  }
  const int rounds_per_cycle = static_cast<int>(classes.size());
  const int cap = cfg.max_iterations > 0 ? cfg.max_iterations
                                         : 10 * rounds_per_cycle;

  RunResult res;
  res.profile = DecisionProfile::initial(num_ues);
  res.trace.rows_per_pass = rounds_per_cycle;

  // Converged once every color class is verified unchanged since the last
  // change anywhere (the classes cycle, so a quiet cycle covers them all).
  std::vector<char> verified(rounds_per_cycle, 0);
  int verified_count = 0;
  for (int round = 0; round < cap; ++round) {
    const int slot = round % rounds_per_cycle;
    const auto& group = classes[slot];
    // All members respond to the same snapshot; same-color UEs cannot be
    // two-tier neighbours, so the simultaneous commit equals any sequential
    // order.
    std::vector<Decision> next(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      next[i] = best_response(group[i], res.profile, topo, params).decision;
    }
    int changes = 0;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (!(next[i] == res.profile.decisions[group[i]])) ++changes;
      res.profile.decisions[group[i]] = next[i];
    }
    if (changes > 0) {
      std::fill(verified.begin(), verified.end(), 0);
      verified[slot] = 1;
      verified_count = 1;
    } else if (!verified[slot]) {
      verified[slot] = 1;
      ++verified_count;
    }

    TraceRow row = evaluate_trace_row(round + 1, res.profile, topo, params);
    row.changes = changes;
    res.trace.rows.push_back(row);

    if (verified_count == rounds_per_cycle) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<int>(res.trace.rows.size());
  return res;
}

RunResult sa_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::Sa)
    throw std::invalid_argument("sa_run: config is for a different algorithm");
  params.validate();
  if (!(cfg.sa.beta0 >= 0) || !(cfg.sa.tau > 0))
    throw std::invalid_argument("sa_run: schedule requires beta0 >= 0 and tau > 0");
  const int num_ues = static_cast<int>(topo.num_ues());
  const int cap = cfg.max_iterations > 0 ? cfg.max_iterations
                                         : default_iteration_cap(topo, Algorithm::Sa);

  RunResult res;
  res.profile = DecisionProfile::initial(num_ues);
  res.trace.rows_per_pass = num_ues;
  Rng draw = Rng(cfg.seed).split(kSamplerStream);

  std::vector<Decision> candidates;
  std::vector<double> weight;
  for (int it = 0; it < cap; ++it) {
    const UeIndex u = static_cast<UeIndex>(it % num_ues);
    const double beta = cfg.sa.beta0 * (1.0 + it / cfg.sa.tau);
    const FbsLoad load = compute_fbs_load(res.profile, topo);

    candidates.clear();
    weight.clear();
    double best = -std::numeric_limits<double>::infinity();
    for (FbsIndex b : topo.eligible(u)) {
      for (std::int32_t k = 0; k < params.probability_levels; ++k) {
        const Decision cand{b, AccessProbability{k}};
        const double p = local_profit(u, cand, res.profile, load, topo, params);
        candidates.push_back(cand);
        weight.push_back(p);
        best = std::max(best, p);
      }
    }
    double total = 0.0;
    for (double& w : weight) {
      w = std::exp(beta * (w - best));  // shift so exp never overflows
      total += w;
    }
    const double x = draw.next_double() * total;
    double acc = 0.0;
    std::size_t chosen = weight.size() - 1;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      acc += weight[i];
      if (x < acc) {
        chosen = i;
        break;
      }
    }

    const bool changed = !(candidates[chosen] == res.profile.decisions[u]);
    res.profile.decisions[u] = candidates[chosen];
    TraceRow row = evaluate_trace_row(it + 1, res.profile, topo, params);
    row.changes = changed ? 1 : 0;
    res.trace.rows.push_back(row);
  }
  res.converged = false;  // the sampler has no stopping rule
  res.iterations = static_cast<int>(res.trace.rows.size());
  return res;
}

RunResult la_run(const Topology& topo, const ModelParams& params, const RunConfig& cfg) {
  if (cfg.algorithm != Algorithm::La)
    throw std::invalid_argument("la_run: config is for a different algorithm");
  params.validate();
  const int num_ues = static_cast<int>(topo.num_ues());
  const int num_fbs = static_cast<int>(topo.num_fbs());
  const int cap = cfg.max_iterations > 0 ? cfg.max_iterations
                                         : default_iteration_cap(topo, Algorithm::La);
  const std::int32_t den = params.denominator();

  RunResult res;
  res.profile = DecisionProfile::initial(num_ues);
  res.trace.rows_per_pass = 1;

  // Association: least-loaded eligible FBS, lowest id on ties, in UE-id order.
  std::vector<int> fbs_load_count(num_fbs, 0);
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
    FbsIndex pick = topo.eligible(u).front();
    for (FbsIndex b : topo.eligible(u)) {
      if (fbs_load_count[b] < fbs_load_count[pick]) pick = b;
    }
    res.profile.decisions[u] = Decision{pick, AccessProbability{0}};
    fbs_load_count[pick] += 1;
  }

  // Scheduling sweeps (Jacobi): access levels for one sweep are derived from
  // the previous sweep's gross probabilities.
  for (int sweep = 0; sweep < cap; ++sweep) {
    const FbsLoad prev = compute_fbs_load(res.profile, topo);
    DecisionProfile next = res.profile;
    for (FbsIndex b = 0; b < static_cast<FbsIndex>(num_fbs); ++b) {
      std::int32_t budget = den;
      std::vector<UeIndex> non_gbr;
      for (UeIndex u : topo.coverage(b)) {
        if (res.profile.decisions[u].fbs != b) continue;
        if (!topo.ue(u).bearer.is_gbr()) {
          non_gbr.push_back(u);
          continue;
        }
        // Cheapest level meeting the demand under current interference.
        double factor = 1.0;
        for (FbsIndex o : topo.eligible(u)) {
          if (o == b) continue;
          const double pb = prev.gross_num[o] / static_cast<double>(den);
          factor *= std::clamp(1.0 - pb, 0.0, 1.0);
        }
        std::int32_t need = den + 1;  // unattainable
        if (factor > 0) {
          const double exact = topo.ue(u).bearer.rate_mbps * den /
                               (params.full_rate_mbps * factor);
          need = static_cast<std::int32_t>(std::ceil(exact - 1e-9));
          if (need < 0) need = 0;
        }
        std::int32_t grant = 0;
        if (need <= budget) {
          grant = need;
          budget -= need;
        }
        next.decisions[u].access.numerator = grant;  // 0 == rejected
      }
      if (!non_gbr.empty()) {
        const std::int32_t share = budget / static_cast<std::int32_t>(non_gbr.size());
        for (UeIndex u : non_gbr) next.decisions[u].access.numerator = share;
      }
    }
    const bool changed = !(next == res.profile);
    res.profile = std::move(next);

    TraceRow row = evaluate_trace_row(sweep + 1, res.profile, topo, params);
    row.changes = changed ? 1 : 0;
    res.trace.rows.push_back(row);
    if (!changed) {
      res.converged = true;
      break;
    }
  }
  res.iterations = static_cast<int>(res.trace.rows.size());
  return res;
}

RunResult run_algorithm(const Topology& topo, const ModelParams& params, const RunConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::Ig: return ig_run(topo, params, cfg);
    case Algorithm::Fig: return fig_run(topo, params, cfg);
    case Algorithm::Sa: return sa_run(topo, params, cfg);
    case Algorithm::La: return la_run(topo, params, cfg);
  }
  throw std::invalid_argument("run_algorithm: unknown algorithm");
}

EquilibriumReport equilibrium_check(const DecisionProfile& profile, const Topology& topo,
                                    const ModelParams& params) {
  for (const Decision& d : profile.decisions) {
    if (!d.associated())
      throw std::invalid_argument("equilibrium_check: profile has unassociated UEs");
  }
  const FbsLoad load = compute_fbs_load(profile, topo);
  EquilibriumReport report;
  for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
    const double now = current_profit(u, profile, load, topo, params);
    Deviation dev{u, profile.decisions[u], 0.0};
    for (FbsIndex b : topo.eligible(u)) {
      for (std::int32_t k = 0; k < params.probability_levels; ++k) {
        const Decision cand{b, AccessProbability{k}};
        const double p = local_profit(u, cand, profile, load, topo, params);
        if (p - now > dev.gain) {
          dev.gain = p - now;
          dev.better = cand;
        }
      }
    }
    if (dev.gain > 0) report.deviations.push_back(dev);
  }
  report.is_equilibrium = report.deviations.empty();
  return report;
}

}  // namespace femto
