#include "femto/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "femto/algorithms.hpp"
#include "femto/rng.hpp"

namespace femto {

ExhaustiveResult exhaustive_optimum(const Topology& topo, const ModelParams& params,
                                    std::uint64_t limit) {
  params.validate();
  const auto num_ues = topo.num_ues();

  std::vector<std::vector<Decision>> strategy(num_ues);
  long double space = 1.0L;
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
    for (FbsIndex b : topo.eligible(u)) {
      for (std::int32_t k = 0; k < params.probability_levels; ++k) {
        strategy[u].push_back(Decision{b, AccessProbability{k}});
      }
    }
    space *= static_cast<long double>(strategy[u].size());
  }
  if (space > static_cast<long double>(limit)) {
    throw std::invalid_argument("exhaustive_optimum: state space of about " +
                                std::to_string(static_cast<double>(space)) +
                                " profiles exceeds the limit of " + std::to_string(limit));
  }

  ExhaustiveResult result;
  result.best_potential = -std::numeric_limits<double>::infinity();

  std::vector<std::size_t> digit(num_ues, 0);
  DecisionProfile profile = DecisionProfile::initial(num_ues);
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u)
    profile.decisions[u] = strategy[u][0];

  bool done = false;
  while (!done) {
    ++result.profiles_enumerated;
    const double p = global_potential(profile, topo, params);
    if (p > result.best_potential) {
      result.best_potential = p;
      result.best_profile = profile;
    }
    if (equilibrium_check(profile, topo, params).is_equilibrium) {
      result.equilibria.push_back(profile);
    }

    // Mixed-radix increment, lowest UE index fastest.
    std::size_t pos = 0;
    for (;; ++pos) {
      if (pos == num_ues) {
        done = true;
        break;
      }
      if (++digit[pos] < strategy[pos].size()) {
        profile.decisions[pos] = strategy[pos][digit[pos]];
        break;
      }
      digit[pos] = 0;
      profile.decisions[pos] = strategy[pos][0];
    }
  }
  return result;
}

TileSimResult simulate_tiles(const DecisionProfile& profile, const Topology& topo,
                             const ModelParams& params, std::uint64_t trials,
                             std::uint64_t seed) {
  params.validate();
  if (trials == 0) throw std::invalid_argument("simulate_tiles: trials must be >= 1");
  const auto num_ues = topo.num_ues();
  const auto num_fbs = topo.num_fbs();
  if (profile.size() != num_ues)
    throw std::invalid_argument("simulate_tiles: profile size mismatch");
  const std::int32_t den = params.denominator();

  // Per FBS: its associated UEs with cumulative access slices.
  std::vector<std::vector<UeIndex>> members(num_fbs);
  std::vector<std::vector<std::int32_t>> cum(num_fbs);
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
    const Decision& d = profile.decisions[u];
    if (!d.associated())
      throw std::invalid_argument("simulate_tiles: UE " + std::to_string(topo.ue(u).id) +
                                  " is unassociated");
    if (d.access.numerator < 0 || d.access.numerator > den)
      throw std::invalid_argument("simulate_tiles: access numerator out of range");
  }
  for (FbsIndex b = 0; b < static_cast<FbsIndex>(num_fbs); ++b) {
    std::int32_t acc = 0;
    for (UeIndex u : topo.coverage(b)) {
      const Decision& d = profile.decisions[u];
      if (d.fbs != b || d.access.numerator == 0) continue;
      acc += d.access.numerator;
      members[b].push_back(u);
      cum[b].push_back(acc);
    }
    if (acc > den)
      throw std::invalid_argument("simulate_tiles: FBS " + std::to_string(topo.fbs(b).id) +
                                  " has gross probability above 1");
  }

  Rng rng = Rng(seed).split(0x7469u);
  std::vector<UeIndex> granted(num_fbs);   // -1: silent this tile
  std::vector<std::uint64_t> captures(num_ues, 0);

  for (std::uint64_t t = 0; t < trials; ++t) {
    for (FbsIndex b = 0; b < static_cast<FbsIndex>(num_fbs); ++b) {
      if (members[b].empty()) {
        granted[b] = -1;
        continue;
      }
      const auto x = static_cast<std::int32_t>(rng.next_below(den));
      granted[b] = -1;
      for (std::size_t i = 0; i < cum[b].size(); ++i) {
        if (x < cum[b][i]) {
          granted[b] = members[b][i];
          break;
        }
      }
    }
    for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
      const Decision& d = profile.decisions[u];
      if (granted[d.fbs] != u) continue;
      bool clear = true;
      for (FbsIndex b : topo.eligible(u)) {
        if (b != d.fbs && granted[b] != -1) {
          clear = false;
          break;
        }
      }
      if (clear) ++captures[u];
    }
  }

  TileSimResult out;
  out.trials = trials;
  out.rate_mbps.resize(num_ues);
  out.standard_error.resize(num_ues);
  for (UeIndex u = 0; u < static_cast<UeIndex>(num_ues); ++u) {
    const double p = static_cast<double>(captures[u]) / static_cast<double>(trials);
    out.rate_mbps[u] = params.full_rate_mbps * p;
    out.standard_error[u] =
        params.full_rate_mbps * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  return out;
}

}  // namespace femto
