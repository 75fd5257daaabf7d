#pragma once

#include <cstdint>
#include <vector>

namespace femto {

using FbsIndex = std::int32_t;
using UeIndex = std::int32_t;

/// Sentinel for a UE that has not yet associated with any base station.
inline constexpr FbsIndex kNoFbs = -1;

enum class BearerKind : std::uint8_t { Gbr, NonGbr };

/// QoS class of a UE. A GBR bearer carries a hard rate demand, a Non-GBR
/// bearer an elastic rate cap (both in Mbps).
struct BearerClass {
  BearerKind kind = BearerKind::NonGbr;
  double rate_mbps = 0.0;  // demand for GBR, cap for Non-GBR

  static BearerClass gbr(double demand_mbps) {
    return BearerClass{BearerKind::Gbr, demand_mbps};
  }
  static BearerClass non_gbr(double cap_mbps) {
    return BearerClass{BearerKind::NonGbr, cap_mbps};
  }
  bool is_gbr() const { return kind == BearerKind::Gbr; }
};

/// Channel access probability, kept as an exact rational numerator over the
/// shared denominator (levels - 1). Integer arithmetic keeps per-FBS sums and
/// argmax tie-breaks independent of float rounding.
struct AccessProbability {
  std::int32_t numerator = 0;

  double value(int levels) const {
    return static_cast<double>(numerator) / static_cast<double>(levels - 1);
  }
  friend bool operator==(const AccessProbability&, const AccessProbability&) = default;
};

/// One UE's strategy: the serving base station plus its access probability.
/// `kNoFbs` is only legal before the UE's first update and contributes zero
/// throughput and zero power.
struct Decision {
  FbsIndex fbs = kNoFbs;
  AccessProbability access;

  bool associated() const { return fbs != kNoFbs; }
  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Joint strategy vector, indexed by dense UE index.
struct DecisionProfile {
  std::vector<Decision> decisions;

  static DecisionProfile initial(std::size_t num_ues) {
    DecisionProfile p;
    p.decisions.assign(num_ues, Decision{});
    return p;
  }
  std::size_t size() const { return decisions.size(); }
  friend bool operator==(const DecisionProfile&, const DecisionProfile&) = default;
};

/// Scalar model constants. Defaults are the standard evaluation setup.
struct ModelParams {
  double full_rate_mbps = 100.0;   // nominal rate R with no contention
  int probability_levels = 10;     // n: size of the discrete access set Q
  double gbr_utility = 100.0;      // C1, utility of a satisfied GBR bearer
  double non_gbr_utility = 10.0;   // C2, utility ceiling of a Non-GBR bearer
  double penalty_slope = 100.0;    // C3, slope of the overload penalty
  double idle_power_w = 0.7;       // E1, drawn in both sleep and active mode
  double active_power_w = 6.7;     // E2, extra draw while active
  double transmit_power_w = 2.7;   // E3, scale of the load-proportional draw
  double power_weight = 1.0;       // omega, utility per Watt

  int denominator() const { return probability_levels - 1; }
  double max_active_power_w() const {
    return idle_power_w + active_power_w + transmit_power_w;
  }
  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;
};

}  // namespace femto
