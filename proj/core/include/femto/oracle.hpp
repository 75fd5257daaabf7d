#pragma once

#include <cstdint>
#include <vector>

#include "femto/model.hpp"
#include "femto/topology.hpp"
#include "femto/types.hpp"

namespace femto {

struct ExhaustiveResult {
  DecisionProfile best_profile;
  double best_potential = 0.0;
  std::vector<DecisionProfile> equilibria;
  std::uint64_t profiles_enumerated = 0;
};

/// Ground truth by brute force: enumerates every fully associated profile
/// (each UE ranges over eligible FBSs x access levels), returns the potential
/// maximizer and the complete set of Nash equilibria. Refuses state spaces
/// larger than `limit`.
ExhaustiveResult exhaustive_optimum(const Topology& topo, const ModelParams& params,
                                    std::uint64_t limit = 10'000'000);

struct TileSimResult {
  std::vector<double> rate_mbps;       // per UE index
  std::vector<double> standard_error;  // binomial SE of the rate estimate
  std::uint64_t trials = 0;
};

/// Monte-Carlo tile scheduler, independent of the closed-form rate: per
/// trial every FBS draws one integer below the access denominator, granting
/// the tile to the UE whose cumulative access slice contains it (idling
/// beyond the gross sum). A UE captures the tile when its serving FBS picked
/// it and every other covering FBS stayed silent. Requires a fully
/// associated profile with every gross probability at most 1.
TileSimResult simulate_tiles(const DecisionProfile& profile, const Topology& topo,
                             const ModelParams& params, std::uint64_t trials,
                             std::uint64_t seed);

}  // namespace femto
