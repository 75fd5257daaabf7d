#pragma once

#include <vector>

#include "femto/topology.hpp"
#include "femto/types.hpp"

namespace femto {

/// Utility of a GBR bearer: a hard step, zero below the demand and the full
/// ceiling at or above it.
double utility_gbr(double rate_mbps, double demand_mbps, double gbr_utility);

/// Utility of a Non-GBR bearer: log-proportional below the cap, flat at the
/// ceiling above it. The log-ratio form makes the value base-independent.
double utility_non_gbr(double rate_mbps, double cap_mbps, double non_gbr_utility);

/// Overload penalty: zero for x <= 0, -slope * x beyond.
double penalty(double x, double slope);

/// Per-FBS aggregates of a profile: exact access-numerator sums and
/// association counts. O(|U|) to build, O(1) to consult.
struct FbsLoad {
  std::vector<std::int32_t> gross_num;
  std::vector<std::int32_t> assoc_count;
};

FbsLoad compute_fbs_load(const DecisionProfile& profile, const Topology& topo);

/// Gross transmission probability of FBS b: sum of access probabilities of
/// its associated UEs. May exceed 1 for infeasible intermediate profiles.
double gross_probability(FbsIndex b, const DecisionProfile& profile,
                         const Topology& topo, const ModelParams& params);

/// Expected rate of UE u: R * q_u * prod over covering, non-serving FBSs of
/// (1 - P_b), each factor clamped to [0, 1]. Zero when unassociated.
double throughput(UeIndex u, const DecisionProfile& profile, const Topology& topo,
                  const ModelParams& params);

/// Same, reusing per-FBS aggregates previously built for `profile`.
double throughput(UeIndex u, const DecisionProfile& profile, const FbsLoad& load,
                  const Topology& topo, const ModelParams& params);

/// Power draw of FBS b: idle floor, plus the active block if any UE is
/// associated, plus the transmit term proportional to P_b.
double fbs_power(FbsIndex b, const DecisionProfile& profile, const Topology& topo,
                 const ModelParams& params);

/// Global objective: total bearer utility, minus weighted power over all
/// FBSs (sleeping ones still draw the idle floor), plus overload penalties.
/// Exact potential of the association game: any unilateral decision change
/// moves this by the change in the deviator's local_profit.
double global_potential(const DecisionProfile& profile, const Topology& topo,
                        const ModelParams& params);

/// Local profit of UE u under `candidate`, holding every other UE at
/// `profile`: utilities of u's one-tier neighbours, minus weighted power of
/// u's eligible FBSs, plus their overload penalties.
///
/// `candidate` must either be covered by its FBS or be the unassociated
/// decision with zero access.
double local_profit(UeIndex u, const Decision& candidate, const DecisionProfile& profile,
                    const Topology& topo, const ModelParams& params);

/// Fast path reusing per-FBS aggregates previously built for `profile`.
double local_profit(UeIndex u, const Decision& candidate, const DecisionProfile& profile,
                    const FbsLoad& load, const Topology& topo, const ModelParams& params);

}  // namespace femto
