#include "femto/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace femto {

void ModelParams::validate() const {
  auto reject = [](const std::string& what) {
    throw std::invalid_argument("ModelParams: " + what);
  };
  if (!(full_rate_mbps > 0)) reject("full_rate_mbps must be > 0");
  if (probability_levels < 2) reject("probability_levels must be >= 2");
  if (!(gbr_utility > 0)) reject("gbr_utility must be > 0");
  if (!(non_gbr_utility > 0)) reject("non_gbr_utility must be > 0");
  if (!(gbr_utility > non_gbr_utility))
    reject("gbr_utility must exceed non_gbr_utility (GBR bearers take priority)");
  if (!(penalty_slope > 0)) reject("penalty_slope must be > 0");
  if (penalty_slope < gbr_utility)
    reject("penalty_slope must be at least gbr_utility (overload must dominate)");
  if (!(idle_power_w > 0)) reject("idle_power_w must be > 0");
  if (!(active_power_w > 0)) reject("active_power_w must be > 0");
  if (!(transmit_power_w > 0)) reject("transmit_power_w must be > 0");
  if (power_weight < 0) reject("power_weight must be >= 0");
}

double utility_gbr(double rate_mbps, double demand_mbps, double gbr_utility) {
  if (rate_mbps < 0) throw std::invalid_argument("utility_gbr: negative rate");
  if (!(demand_mbps > 0)) throw std::invalid_argument("utility_gbr: demand must be > 0");
  return rate_mbps >= demand_mbps ? gbr_utility : 0.0;
}

double utility_non_gbr(double rate_mbps, double cap_mbps, double non_gbr_utility) {
  if (rate_mbps < 0) throw std::invalid_argument("utility_non_gbr: negative rate");
  if (!(cap_mbps > 0)) throw std::invalid_argument("utility_non_gbr: cap must be > 0");
  if (rate_mbps >= cap_mbps) return non_gbr_utility;
  return non_gbr_utility * std::log1p(rate_mbps) / std::log1p(cap_mbps);
}

double penalty(double x, double slope) { return x <= 0 ? 0.0 : -slope * x; }

FbsLoad compute_fbs_load(const DecisionProfile& profile, const Topology& topo) {
  FbsLoad load;
  load.gross_num.assign(topo.num_fbs(), 0);
  load.assoc_count.assign(topo.num_fbs(), 0);
  for (const Decision& d : profile.decisions) {
    if (!d.associated()) continue;
    load.gross_num.at(d.fbs) += d.access.numerator;
    load.assoc_count[d.fbs] += 1;
  }
  return load;
}

namespace {

// A pending decision change for one UE, not yet written into the profile.
struct Override {
  UeIndex ue = -1;
  Decision decision;
};

inline const Decision& decision_of(UeIndex v, const DecisionProfile& profile,
                                   const Override& ov) {
  return ov.ue == v ? ov.decision : profile.decisions[v];
}

inline std::int32_t gross_with_override(FbsIndex b, const FbsLoad& load,
                                        const DecisionProfile& profile, const Override& ov) {
  std::int32_t g = load.gross_num[b];
  if (ov.ue >= 0) {
    const Decision& old = profile.decisions[ov.ue];
    if (old.fbs == b) g -= old.access.numerator;
    if (ov.decision.fbs == b) g += ov.decision.access.numerator;
  }
  return g;
}

inline bool active_with_override(FbsIndex b, const FbsLoad& load,
                                 const DecisionProfile& profile, const Override& ov) {
  std::int32_t c = load.assoc_count[b];
  if (ov.ue >= 0) {
    const Decision& old = profile.decisions[ov.ue];
    c -= old.fbs == b ? 1 : 0;
    c += ov.decision.fbs == b ? 1 : 0;
  }
  return c > 0;
}

double rate_of(UeIndex v, const DecisionProfile& profile, const FbsLoad& load,
               const Override& ov, const Topology& topo, const ModelParams& params) {
  const Decision& d = decision_of(v, profile, ov);
  if (!d.associated() || d.access.numerator == 0) return 0.0;
  const double den = params.denominator();
  double rate = params.full_rate_mbps * (d.access.numerator / den);
  for (FbsIndex b : topo.eligible(v)) {
    if (b == d.fbs) continue;
    const std::int32_t g = gross_with_override(b, load, profile, ov);
    if (g <= 0) continue;                           // silent FBS, factor 1
    if (g >= params.denominator()) return 0.0;      // factor clamps to 0
    rate *= 1.0 - g / den;
  }
  return rate;
}

inline double bearer_utility(const UeNode& node, double rate, const ModelParams& params) {
  return node.bearer.is_gbr()
             ? utility_gbr(rate, node.bearer.rate_mbps, params.gbr_utility)
             : utility_non_gbr(rate, node.bearer.rate_mbps, params.non_gbr_utility);
}

inline double fbs_terms(FbsIndex b, const FbsLoad& load, const DecisionProfile& profile,
                        const Override& ov, const ModelParams& params) {
  const double pb = gross_with_override(b, load, profile, ov) / double(params.denominator());
  const bool active = active_with_override(b, load, profile, ov);
  const double power = params.idle_power_w + (active ? params.active_power_w : 0.0) +
                       params.transmit_power_w * pb;
  return -params.power_weight * power + penalty(pb - 1.0, params.penalty_slope);
}

void check_ue_index(UeIndex u, const Topology& topo, const char* where) {
  if (u < 0 || static_cast<std::size_t>(u) >= topo.num_ues())
    throw std::out_of_range(std::string(where) + ": unknown UE index " + std::to_string(u));
}

void check_fbs_index(FbsIndex b, const Topology& topo, const char* where) {
  if (b < 0 || static_cast<std::size_t>(b) >= topo.num_fbs())
    throw std::out_of_range(std::string(where) + ": unknown FBS index " + std::to_string(b));
}

void check_profile(const DecisionProfile& profile, const Topology& topo, const char* where) {
  if (profile.size() != topo.num_ues())
    throw std::invalid_argument(std::string(where) + ": profile has " +
                                std::to_string(profile.size()) + " decisions for " +
                                std::to_string(topo.num_ues()) + " UEs");
}

}  // namespace

double gross_probability(FbsIndex b, const DecisionProfile& profile, const Topology& topo,
                         const ModelParams& params) {
  check_fbs_index(b, topo, "gross_probability");
  check_profile(profile, topo, "gross_probability");
  std::int64_t num = 0;
  for (UeIndex u : topo.coverage(b)) {
    const Decision& d = profile.decisions[u];
    if (d.fbs == b) num += d.access.numerator;
  }
  return static_cast<double>(num) / params.denominator();
}

double throughput(UeIndex u, const DecisionProfile& profile, const Topology& topo,
                  const ModelParams& params) {
  check_ue_index(u, topo, "throughput");
  check_profile(profile, topo, "throughput");
  const FbsLoad load = compute_fbs_load(profile, topo);
  return rate_of(u, profile, load, Override{}, topo, params);
}

double throughput(UeIndex u, const DecisionProfile& profile, const FbsLoad& load,
                  const Topology& topo, const ModelParams& params) {
  check_ue_index(u, topo, "throughput");
  check_profile(profile, topo, "throughput");
  return rate_of(u, profile, load, Override{}, topo, params);
}

double fbs_power(FbsIndex b, const DecisionProfile& profile, const Topology& topo,
                 const ModelParams& params) {
  check_fbs_index(b, topo, "fbs_power");
  check_profile(profile, topo, "fbs_power");
  std::int64_t num = 0;
  bool active = false;
  for (UeIndex u : topo.coverage(b)) {
    const Decision& d = profile.decisions[u];
    if (d.fbs == b) {
      num += d.access.numerator;
      active = true;
    }
  }
  return params.idle_power_w + (active ? params.active_power_w : 0.0) +
         params.transmit_power_w * (static_cast<double>(num) / params.denominator());
}

double global_potential(const DecisionProfile& profile, const Topology& topo,
                        const ModelParams& params) {
  check_profile(profile, topo, "global_potential");
  const FbsLoad load = compute_fbs_load(profile, topo);
  const Override none{};
  double total = 0.0;
  for (UeIndex v = 0; v < static_cast<UeIndex>(topo.num_ues()); ++v) {
    total += bearer_utility(topo.ue(v), rate_of(v, profile, load, none, topo, params), params);
  }
  for (FbsIndex b = 0; b < static_cast<FbsIndex>(topo.num_fbs()); ++b) {
    total += fbs_terms(b, load, profile, none, params);
  }
  return total;
}

double local_profit(UeIndex u, const Decision& candidate, const DecisionProfile& profile,
                    const FbsLoad& load, const Topology& topo, const ModelParams& params) {
  check_ue_index(u, topo, "local_profit");
  check_profile(profile, topo, "local_profit");
  if (candidate.associated()) {
    check_fbs_index(candidate.fbs, topo, "local_profit");
    if (!topo.covers(candidate.fbs, u))
      throw std::invalid_argument("local_profit: FBS " + std::to_string(topo.fbs(candidate.fbs).id) +
                                  " does not cover UE " + std::to_string(topo.ue(u).id));
    if (candidate.access.numerator < 0 || candidate.access.numerator > params.denominator())
      throw std::invalid_argument("local_profit: access numerator out of range");
  } else if (candidate.access.numerator != 0) {
    throw std::invalid_argument("local_profit: unassociated candidate must have zero access");
  }

  const Override ov{u, candidate};
  double theta = 0.0;
  for (UeIndex v : topo.neighbors(u)) {
    theta += bearer_utility(topo.ue(v), rate_of(v, profile, load, ov, topo, params), params);
  }
  for (FbsIndex b : topo.eligible(u)) {
    theta += fbs_terms(b, load, profile, ov, params);
  }
  return theta;
}

double local_profit(UeIndex u, const Decision& candidate, const DecisionProfile& profile,
                    const Topology& topo, const ModelParams& params) {
  check_profile(profile, topo, "local_profit");
  const FbsLoad load = compute_fbs_load(profile, topo);
  return local_profit(u, candidate, profile, load, topo, params);
}

}  // namespace femto
