#pragma once

#include <cmath>
#include <vector>

#include "femto/model.hpp"
#include "femto/rng.hpp"
#include "femto/topology.hpp"
#include "femto/types.hpp"

namespace testutil {

using namespace femto;

constexpr double kPi = 3.14159265358979323846;

/// Random instance with every UE dropped inside some FBS disk, so coverage
/// never fails. Geometry box scales with the FBS count.
inline Topology random_topology(Rng& rng, int max_fbs, int max_ues,
                                double gbr_demand = 10.0, double non_gbr_cap = 20.0) {
  const int nb = 1 + static_cast<int>(rng.next_below(max_fbs));
  const int nu = 1 + static_cast<int>(rng.next_below(max_ues));
  const double box = 12.0 * std::sqrt(static_cast<double>(nb));
  std::vector<FbsNode> fbs;
  for (int b = 0; b < nb; ++b) {
    fbs.push_back(FbsNode{b + 1, rng.next_double() * box, rng.next_double() * box, 10.0});
  }
  std::vector<UeNode> ues;
  for (int u = 0; u < nu; ++u) {
    const FbsNode& host = fbs[rng.next_below(nb)];
    const double radius = host.range_m * std::sqrt(rng.next_double());
    const double angle = 2.0 * kPi * rng.next_double();
    const BearerClass bearer = rng.next_below(2) == 0 ? BearerClass::gbr(gbr_demand)
                                                      : BearerClass::non_gbr(non_gbr_cap);
    ues.push_back(UeNode{u + 1, host.x + radius * std::cos(angle),
                         host.y + radius * std::sin(angle), bearer});
  }
  return Topology::build(std::move(fbs), std::move(ues));
}

inline DecisionProfile random_profile(Rng& rng, const Topology& topo, const ModelParams& params,
                                      double unassociated_prob = 0.0) {
  DecisionProfile prof = DecisionProfile::initial(topo.num_ues());
  for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
    if (unassociated_prob > 0 && rng.next_double() < unassociated_prob) continue;
    const auto& elig = topo.eligible(u);
    const FbsIndex b = elig[rng.next_below(static_cast<std::uint32_t>(elig.size()))];
    const auto k = static_cast<std::int32_t>(rng.next_below(params.probability_levels));
    prof.decisions[u] = Decision{b, AccessProbability{k}};
  }
  return prof;
}

/// Random profile with every per-FBS gross probability at most 1.
inline DecisionProfile random_feasible_profile(Rng& rng, const Topology& topo,
                                               const ModelParams& params) {
  DecisionProfile prof = random_profile(rng, topo, params);
  const std::int32_t den = params.denominator();
  for (FbsIndex b = 0; b < static_cast<FbsIndex>(topo.num_fbs()); ++b) {
    for (;;) {
      std::int32_t gross = 0;
      UeIndex heaviest = -1;
      for (UeIndex u : topo.coverage(b)) {
        const Decision& d = prof.decisions[u];
        if (d.fbs != b) continue;
        gross += d.access.numerator;
        if (heaviest < 0 ||
            d.access.numerator > prof.decisions[heaviest].access.numerator) {
          heaviest = u;
        }
      }
      if (gross <= den) break;
      prof.decisions[heaviest].access.numerator -= 1;
    }
  }
  return prof;
}

}  // namespace testutil
