#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "femto/types.hpp"

namespace femto {

struct FbsNode {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double range_m = 10.0;
};

struct UeNode {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  BearerClass bearer;
};

/// Immutable network instance: node geometry plus the derived coverage sets,
/// per-UE eligible base stations, and the one- and two-tier neighbour sets
/// used by the local profit function.
///
/// Nodes are sorted by id at construction, so dense indices follow id order
/// and "lowest id" tie-breaks reduce to "lowest index".
class Topology {
 public:
  /// Validates ids and coverage (a UE within range of no FBS is an error,
  /// reported with the offending UE id). Membership uses the closed ball:
  /// distance == range counts as covered.
  static Topology build(std::vector<FbsNode> fbs, std::vector<UeNode> ues);

  std::size_t num_fbs() const { return fbs_.size(); }
  std::size_t num_ues() const { return ues_.size(); }
  const FbsNode& fbs(FbsIndex b) const { return fbs_.at(b); }
  const UeNode& ue(UeIndex u) const { return ues_.at(u); }
  const std::vector<FbsNode>& fbs_nodes() const { return fbs_; }
  const std::vector<UeNode>& ue_nodes() const { return ues_; }

  /// N_b: UEs inside FBS b's range, ascending index.
  const std::vector<UeIndex>& coverage(FbsIndex b) const { return coverage_.at(b); }
  /// FBSs whose range contains UE u, ascending index.
  const std::vector<FbsIndex>& eligible(UeIndex u) const { return eligible_.at(u); }
  /// One-tier neighbour set of u (all UEs sharing a covering FBS, u included).
  const std::vector<UeIndex>& neighbors(UeIndex u) const { return alpha1_.at(u); }
  /// Two-tier neighbour set of u (union of neighbours' neighbour sets).
  const std::vector<UeIndex>& neighbors2(UeIndex u) const { return alpha2_.at(u); }

  bool covers(FbsIndex b, UeIndex u) const;

  FbsIndex fbs_index(int id) const;  // throws std::out_of_range if unknown
  UeIndex ue_index(int id) const;

 private:
  std::vector<FbsNode> fbs_;
  std::vector<UeNode> ues_;
  std::vector<std::vector<UeIndex>> coverage_;
  std::vector<std::vector<FbsIndex>> eligible_;
  std::vector<std::vector<UeIndex>> alpha1_;
  std::vector<std::vector<UeIndex>> alpha2_;
};

/// UE interference graph: vertices are UEs, an edge joins every pair of
/// two-tier neighbours. Groups that may update simultaneously are exactly the
/// independent sets of this graph.
struct ConflictGraph {
  std::vector<std::vector<UeIndex>> adjacency;  // sorted, no self loops
  int max_degree = 0;

  std::size_t num_vertices() const { return adjacency.size(); }
};

ConflictGraph conflict_graph(const Topology& topo);

struct Coloring {
  std::vector<int> color;  // 1-based color per UE index
  int num_colors = 0;      // number of distinct colors in use
};

/// Distributed greedy coloring: every vertex starts with its own index as its
/// color; sweeping the color values from high to low, each vertex holding the
/// current value moves to the smallest color absent from its neighbourhood.
/// Uses at most max_degree + 1 colors.
Coloring greedy_color(const ConflictGraph& graph);

/// Bundled three-FBS, eleven-UE layout used by the convergence study. The
/// same layout ships as data/simple_topology.txt; parsing goes through the
/// regular text loader so a substitute file can be used instead.
Topology simple_topology();

struct GridSpec {
  int rows = 5;
  int cols = 5;
  double spacing_m = 14.0;
  double range_m = 10.0;
  int ues_per_circle = 8;
  int gbr_per_circle = 2;
  double gbr_demand_mbps = 10.0;
  double non_gbr_cap_mbps = 20.0;
  /// When set, UEs are dropped only in alternate (checkerboard) circles;
  /// the remaining FBSs exist but start with no local users.
  bool alternate_circles = false;
  /// When set, every circle gets its UEs but only alternate circles carry
  /// the GBR share; the others hold elastic bearers exclusively. Mutually
  /// exclusive with alternate_circles.
  bool alternate_gbr_mix = false;
};

/// rows x cols FBS grid; each populated circle gets gbr_per_circle GBR UEs
/// and the rest Non-GBR, placed uniformly in the circle's inscribed square.
/// Deterministic in (spec, seed).
Topology grid_topology(const GridSpec& spec, std::uint64_t seed);

/// Line-oriented text format:
///   fbs <id> <x> <y> <range_m>
///   ue <id> <x> <y> <gbr|nongbr> <rate_mbps>
/// '#' starts a comment. See data/simple_topology.txt for an example.
Topology parse_topology_text(const std::string& text, const std::string& context = "<string>");
Topology load_topology(const std::string& path);
std::string format_topology_text(const Topology& topo);
void save_topology(const Topology& topo, const std::string& path);

}  // namespace femto
