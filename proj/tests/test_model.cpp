#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "femto/model.hpp"
#include "femto/rng.hpp"
#include "test_util.hpp"

using namespace femto;

namespace {

Topology single_cell(BearerClass bearer, double ue_x = 3.0) {
  return Topology::build({FbsNode{1, 0, 0, 10}}, {UeNode{1, ue_x, 0, bearer}});
}

}  // namespace

TEST_CASE("gbr utility is a hard step") {
  CHECK(utility_gbr(5, 10, 100) == 0.0);
  CHECK(utility_gbr(10, 10, 100) == 100.0);  // closed upper branch at the demand
  CHECK(utility_gbr(11.11, 10, 100) == 100.0);
  CHECK(utility_gbr(0, 10, 100) == 0.0);
  CHECK_THROWS_AS(utility_gbr(-1, 10, 100), std::invalid_argument);
  CHECK_THROWS_AS(utility_gbr(5, 0, 100), std::invalid_argument);
}

TEST_CASE("non-gbr utility is log-proportional and capped") {
  CHECK(utility_non_gbr(0, 20, 10) == 0.0);
  CHECK(utility_non_gbr(20, 20, 10) == 10.0);
  CHECK(utility_non_gbr(35, 20, 10) == 10.0);
  CHECK(utility_non_gbr(10, 20, 10) == doctest::Approx(7.876096569652561).epsilon(1e-12));
  CHECK_THROWS_AS(utility_non_gbr(-0.5, 20, 10), std::invalid_argument);
  CHECK_THROWS_AS(utility_non_gbr(5, -20, 10), std::invalid_argument);
}

TEST_CASE("non-gbr utility: monotone, continuous at the cap, base-invariant") {
  double prev = -1.0;
  for (double r = 0; r <= 40.0; r += 0.25) {
    const double f = utility_non_gbr(r, 20, 10);
    CHECK(f >= prev);
    prev = f;
    // same value through base-10 logs
    const double base10 = r >= 20 ? 10.0 : 10.0 * std::log10(r + 1) / std::log10(21.0);
    CHECK(f == doctest::Approx(base10).epsilon(1e-12));
  }
  CHECK(utility_non_gbr(std::nextafter(20.0, 0.0), 20, 10) ==
        doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("penalty is zero below the threshold and linear above") {
  CHECK(penalty(0.0, 100) == 0.0);
  CHECK(penalty(-1.0, 100) == 0.0);
  CHECK(penalty(0.2, 100) == doctest::Approx(-20.0).epsilon(1e-12));
}

TEST_CASE("gross probability sums associated access exactly") {
  // three UEs under one FBS with access 1/9, 2/9, 3/9
  std::vector<UeNode> ues;
  for (int i = 1; i <= 3; ++i) ues.push_back(UeNode{i, double(i), 0, BearerClass::non_gbr(20)});
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}}, std::move(ues));
  ModelParams params;

  DecisionProfile prof = DecisionProfile::initial(3);
  CHECK(gross_probability(0, prof, topo, params) == 0.0);  // empty sum
  for (UeIndex u = 0; u < 3; ++u) prof.decisions[u] = Decision{0, AccessProbability{u + 1}};
  CHECK(gross_probability(0, prof, topo, params) == 6.0 / 9.0);
  prof.decisions[0] = Decision{0, AccessProbability{9}};
  prof.decisions[1] = Decision{};
  prof.decisions[2] = Decision{};
  CHECK(gross_probability(0, prof, topo, params) == 1.0);
  CHECK_THROWS_AS(gross_probability(7, prof, topo, params), std::out_of_range);
}

TEST_CASE("throughput: no interferers, zero access, and interference product") {
  ModelParams params;
  params.probability_levels = 11;  // access grid of tenths

  // u covered by both cells, w only by the far one
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}, FbsNode{2, 15, 0, 10}},
                                  {UeNode{1, 7, 0, BearerClass::non_gbr(20)},
                                   UeNode{2, 18, 0, BearerClass::non_gbr(20)}});
  DecisionProfile prof = DecisionProfile::initial(2);
  prof.decisions[0] = Decision{0, AccessProbability{5}};  // q = 0.5 on cell 1
  prof.decisions[1] = Decision{1, AccessProbability{0}};

  CHECK(throughput(0, prof, topo, params) == doctest::Approx(50.0).epsilon(1e-12));

  prof.decisions[1].access.numerator = 4;  // interferer at P = 0.4
  CHECK(throughput(0, prof, topo, params) == doctest::Approx(30.0).epsilon(1e-12));

  prof.decisions[0].access.numerator = 0;
  CHECK(throughput(0, prof, topo, params) == 0.0);
  CHECK(throughput(1, DecisionProfile::initial(2), topo, params) == 0.0);  // unassociated
  CHECK_THROWS_AS(throughput(9, prof, topo, params), std::out_of_range);
}

TEST_CASE("throughput: monotone in interference, linear in own access") {
  ModelParams params;
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}, FbsNode{2, 15, 0, 10}},
                                  {UeNode{1, 7, 0, BearerClass::non_gbr(20)},
                                   UeNode{2, 18, 0, BearerClass::non_gbr(20)}});
  DecisionProfile prof = DecisionProfile::initial(2);
  prof.decisions[0] = Decision{0, AccessProbability{3}};
  double prev = 1e9;
  for (std::int32_t k = 0; k <= 9; ++k) {
    prof.decisions[1] = Decision{1, AccessProbability{k}};
    const double r = throughput(0, prof, topo, params);
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
  // linear in q for fixed interference
  prof.decisions[1] = Decision{1, AccessProbability{4}};
  prof.decisions[0].access.numerator = 1;
  const double unit = throughput(0, prof, topo, params);
  for (std::int32_t k = 2; k <= 9; ++k) {
    prof.decisions[0].access.numerator = k;
    CHECK(throughput(0, prof, topo, params) == doctest::Approx(unit * k).epsilon(1e-12));
  }
}

TEST_CASE("throughput clamps overloaded interferers to zero rate") {
  ModelParams params;
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}, FbsNode{2, 15, 0, 10}},
                                  {UeNode{1, 7, 0, BearerClass::non_gbr(20)},
                                   UeNode{2, 18, 0, BearerClass::non_gbr(20)},
                                   UeNode{3, 16, 1, BearerClass::non_gbr(20)}});
  DecisionProfile prof = DecisionProfile::initial(3);
  prof.decisions[0] = Decision{0, AccessProbability{9}};
  prof.decisions[1] = Decision{1, AccessProbability{9}};
  prof.decisions[2] = Decision{1, AccessProbability{3}};  // cell 2 now beyond 1
  CHECK(gross_probability(1, prof, topo, params) > 1.0);
  CHECK(throughput(0, prof, topo, params) == 0.0);  // factor clamped at 0, not negative
}

TEST_CASE("fbs power: sleep floor, active block, transmit term") {
  ModelParams params;
  Topology topo = single_cell(BearerClass::gbr(10));
  DecisionProfile prof = DecisionProfile::initial(1);
  CHECK(fbs_power(0, prof, topo, params) == 0.7);  // sleeping: idle draw only

  prof.decisions[0] = Decision{0, AccessProbability{9}};
  CHECK(fbs_power(0, prof, topo, params) ==
        params.idle_power_w + params.active_power_w + params.transmit_power_w);
  CHECK(fbs_power(0, prof, topo, params) == doctest::Approx(10.1).epsilon(1e-12));

  // half load
  ModelParams p11 = params;
  p11.probability_levels = 11;
  prof.decisions[0] = Decision{0, AccessProbability{5}};
  CHECK(fbs_power(0, prof, topo, p11) == doctest::Approx(8.75).epsilon(1e-12));

  // an associated UE with zero access still keeps the cell active
  prof.decisions[0] = Decision{0, AccessProbability{0}};
  CHECK(fbs_power(0, prof, topo, params) == doctest::Approx(7.4).epsilon(1e-12));
}

TEST_CASE("fbs power stays within bounds for feasible load") {
  ModelParams params;
  Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    Topology topo = testutil::random_topology(rng, 3, 6);
    DecisionProfile prof = testutil::random_feasible_profile(rng, topo, params);
    for (FbsIndex b = 0; b < static_cast<FbsIndex>(topo.num_fbs()); ++b) {
      const double e = fbs_power(b, prof, topo, params);
      CHECK(e >= params.idle_power_w - 1e-12);
      CHECK(e <= params.max_active_power_w() + 1e-12);
    }
  }
}

TEST_CASE("global potential: worked single-UE cell") {
  ModelParams params;
  Topology topo = single_cell(BearerClass::gbr(10));
  DecisionProfile prof = DecisionProfile::initial(1);
  prof.decisions[0] = Decision{0, AccessProbability{1}};  // q = 1/9, rate 11.1
  CHECK(global_potential(prof, topo, params) == doctest::Approx(92.3).epsilon(1e-9));
}

TEST_CASE("global potential: idle network is pure idle power") {
  ModelParams params;
  std::vector<FbsNode> fbs{FbsNode{1, 0, 0, 10}, FbsNode{2, 30, 0, 10}, FbsNode{3, 60, 0, 10}};
  std::vector<UeNode> ues{UeNode{1, 1, 0, BearerClass::gbr(10)},
                          UeNode{2, 31, 0, BearerClass::non_gbr(20)},
                          UeNode{3, 61, 0, BearerClass::non_gbr(20)}};
  Topology topo = Topology::build(std::move(fbs), std::move(ues));
  DecisionProfile prof = DecisionProfile::initial(3);
  CHECK(global_potential(prof, topo, params) ==
        doctest::Approx(-0.7 * 3).epsilon(1e-12));
}

TEST_CASE("global potential includes overload penalties") {
  ModelParams params;
  std::vector<UeNode> ues{UeNode{1, 1, 0, BearerClass::non_gbr(20)},
                          UeNode{2, 2, 0, BearerClass::non_gbr(20)}};
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}}, std::move(ues));
  ModelParams p11 = params;
  p11.probability_levels = 11;
  DecisionProfile prof = DecisionProfile::initial(2);
  prof.decisions[0] = Decision{0, AccessProbability{8}};
  prof.decisions[1] = Decision{0, AccessProbability{4}};  // P = 1.2
  // with and without the penalty term differ by exactly C3 * 0.2
  const double with_pen = global_potential(prof, topo, p11);
  double manual = 0.0;
  for (UeIndex u = 0; u < 2; ++u)
    manual += utility_non_gbr(throughput(u, prof, topo, p11), 20, p11.non_gbr_utility);
  manual -= p11.power_weight * fbs_power(0, prof, topo, p11);
  CHECK(with_pen == doctest::Approx(manual - 20.0).epsilon(1e-9));
}

TEST_CASE("potential with zero power weight and feasible load is the utility sum") {
  ModelParams params;
  params.power_weight = 0.0;
  Rng rng(1213);
  for (int i = 0; i < 25; ++i) {
    Topology topo = testutil::random_topology(rng, 3, 6);
    DecisionProfile prof = testutil::random_feasible_profile(rng, topo, params);
    double utility = 0.0;
    for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
      const UeNode& node = topo.ue(u);
      const double r = throughput(u, prof, topo, params);
      utility += node.bearer.is_gbr() ? utility_gbr(r, node.bearer.rate_mbps, params.gbr_utility)
                                      : utility_non_gbr(r, node.bearer.rate_mbps,
                                                        params.non_gbr_utility);
    }
    CHECK(global_potential(prof, topo, params) == doctest::Approx(utility).epsilon(1e-9));
  }
}

TEST_CASE("local profit: worked single-UE cell and unassociated candidate") {
  ModelParams params;
  Topology topo = single_cell(BearerClass::gbr(10));
  DecisionProfile prof = DecisionProfile::initial(1);
  CHECK(local_profit(0, Decision{0, AccessProbability{1}}, prof, topo, params) ==
        doctest::Approx(92.3).epsilon(1e-9));
  // unassociated candidate: only the sleeping idle draw remains
  CHECK(local_profit(0, Decision{}, prof, topo, params) ==
        doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("local profit rejects candidates outside the UE's coverage") {
  ModelParams params;
  Topology topo = Topology::build({FbsNode{1, 0, 0, 10}, FbsNode{2, 50, 0, 10}},
                                  {UeNode{1, 1, 0, BearerClass::gbr(10)},
                                   UeNode{2, 51, 0, BearerClass::gbr(10)}});
  DecisionProfile prof = DecisionProfile::initial(2);
  CHECK_THROWS_AS(local_profit(0, Decision{1, AccessProbability{1}}, prof, topo, params),
                  std::invalid_argument);
  CHECK_THROWS_AS(local_profit(0, Decision{kNoFbs, AccessProbability{2}}, prof, topo, params),
                  std::invalid_argument);
}

TEST_CASE("potential identity: every unilateral deviation moves both by the same amount") {
  // The potential-game engine: for random instances, profiles and candidate
  // pairs, the global objective change equals the local profit change.
  ModelParams base;
  const double omegas[] = {0.0, 0.5, 1.0, 2.0};
  Rng rng(2024);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    ModelParams params = base;
    params.power_weight = omegas[inst % 4];
    params.probability_levels = inst % 2 == 0 ? 10 : 4;
    Topology topo = testutil::random_topology(rng, 4, 8);
    DecisionProfile prof = testutil::random_profile(rng, topo, params, 0.1);
    for (UeIndex u = 0; u < static_cast<UeIndex>(topo.num_ues()); ++u) {
      std::vector<double> pot, theta;
      for (FbsIndex b : topo.eligible(u)) {
        for (std::int32_t k = 0; k < params.probability_levels; ++k) {
          const Decision cand{b, AccessProbability{k}};
          DecisionProfile variant = prof;
          variant.decisions[u] = cand;
          pot.push_back(global_potential(variant, topo, params));
          theta.push_back(local_profit(u, cand, prof, topo, params));
        }
      }
      for (std::size_t i = 0; i < pot.size(); ++i) {
        for (std::size_t j = 0; j < pot.size(); ++j) {
          const double diff = std::abs((pot[i] - pot[j]) - (theta[i] - theta[j]));
          worst = std::max(worst, diff);
        }
      }
    }
  }
  CHECK(worst <= 1e-9);
}
