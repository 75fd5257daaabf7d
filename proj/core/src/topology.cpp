#include "femto/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "femto/rng.hpp"

namespace femto {

namespace {

double distance(double ax, double ay, double bx, double by) {
  return std::hypot(ax - bx, ay - by);
}

std::vector<UeIndex> sorted_union(const std::vector<std::vector<UeIndex>>& sets,
                                  const std::vector<UeIndex>& which) {
  std::set<UeIndex> acc;
  for (UeIndex i : which) acc.insert(sets[i].begin(), sets[i].end());
  return {acc.begin(), acc.end()};
}

}  // namespace

Topology Topology::build(std::vector<FbsNode> fbs, std::vector<UeNode> ues) {
  if (fbs.empty()) throw std::invalid_argument("topology: no FBS nodes");
  if (ues.empty()) throw std::invalid_argument("topology: no UE nodes");

  std::sort(fbs.begin(), fbs.end(), [](const FbsNode& a, const FbsNode& b) { return a.id < b.id; });
  std::sort(ues.begin(), ues.end(), [](const UeNode& a, const UeNode& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < fbs.size(); ++i)
    if (fbs[i].id == fbs[i - 1].id)
      throw std::invalid_argument("topology: duplicate FBS id " + std::to_string(fbs[i].id));
  for (std::size_t i = 1; i < ues.size(); ++i)
    if (ues[i].id == ues[i - 1].id)
      throw std::invalid_argument("topology: duplicate UE id " + std::to_string(ues[i].id));
  for (const FbsNode& b : fbs)
    if (!(b.range_m > 0))
      throw std::invalid_argument("topology: FBS " + std::to_string(b.id) + " has range <= 0");
  for (const UeNode& u : ues)
    if (!(u.bearer.rate_mbps > 0))
      throw std::invalid_argument("topology: UE " + std::to_string(u.id) +
                                  " has non-positive bearer rate");

  Topology t;
  t.fbs_ = std::move(fbs);
  t.ues_ = std::move(ues);
  const auto nb = t.fbs_.size();
  const auto nu = t.ues_.size();
  t.coverage_.assign(nb, {});
  t.eligible_.assign(nu, {});

  for (FbsIndex b = 0; b < static_cast<FbsIndex>(nb); ++b) {
    const FbsNode& f = t.fbs_[b];
    for (UeIndex u = 0; u < static_cast<UeIndex>(nu); ++u) {
      const UeNode& n = t.ues_[u];
      if (distance(f.x, f.y, n.x, n.y) <= f.range_m) {
        t.coverage_[b].push_back(u);
        t.eligible_[u].push_back(b);
      }
    }
  }
  for (UeIndex u = 0; u < static_cast<UeIndex>(nu); ++u) {
    if (t.eligible_[u].empty())
      throw std::invalid_argument("topology: UE " + std::to_string(t.ues_[u].id) +
                                  " is covered by no FBS");
  }

  t.alpha1_.assign(nu, {});
  for (UeIndex u = 0; u < static_cast<UeIndex>(nu); ++u) {
    std::set<UeIndex> acc;
    for (FbsIndex b : t.eligible_[u]) acc.insert(t.coverage_[b].begin(), t.coverage_[b].end());
    t.alpha1_[u].assign(acc.begin(), acc.end());
  }
  t.alpha2_.assign(nu, {});
  for (UeIndex u = 0; u < static_cast<UeIndex>(nu); ++u) {
    t.alpha2_[u] = sorted_union(t.alpha1_, t.alpha1_[u]);
  }
  return t;
}

bool Topology::covers(FbsIndex b, UeIndex u) const {
  const auto& e = eligible_.at(u);
  return std::binary_search(e.begin(), e.end(), b);
}

FbsIndex Topology::fbs_index(int id) const {
  auto it = std::lower_bound(fbs_.begin(), fbs_.end(), id,
                             [](const FbsNode& n, int v) { return n.id < v; });
  if (it == fbs_.end() || it->id != id)
    throw std::out_of_range("topology: unknown FBS id " + std::to_string(id));
  return static_cast<FbsIndex>(it - fbs_.begin());
}

UeIndex Topology::ue_index(int id) const {
  auto it = std::lower_bound(ues_.begin(), ues_.end(), id,
                             [](const UeNode& n, int v) { return n.id < v; });
  if (it == ues_.end() || it->id != id)
    throw std::out_of_range("topology: unknown UE id " + std::to_string(id));
  return static_cast<UeIndex>(it - ues_.begin());
}

ConflictGraph conflict_graph(const Topology& topo) {
  ConflictGraph g;
  const auto nu = topo.num_ues();
  g.adjacency.assign(nu, {});
  for (UeIndex u = 0; u < static_cast<UeIndex>(nu); ++u) {
    for (UeIndex v : topo.neighbors2(u)) {
      if (v != u) g.adjacency[u].push_back(v);
    }
    g.max_degree = std::max(g.max_degree, static_cast<int>(g.adjacency[u].size()));
  }
  return g;
}

Coloring greedy_color(const ConflictGraph& graph) {
  const auto n = graph.num_vertices();
  Coloring c;
  c.color.resize(n);
  for (std::size_t u = 0; u < n; ++u) c.color[u] = static_cast<int>(u) + 1;

  std::vector<char> used;
  for (int t = static_cast<int>(n); t >= 1; --t) {
    // Snapshot: all vertices holding color t move in the same step.
    std::vector<UeIndex> holders;
    for (std::size_t u = 0; u < n; ++u)
      if (c.color[u] == t) holders.push_back(static_cast<UeIndex>(u));
    std::vector<int> next(holders.size());
    for (std::size_t i = 0; i < holders.size(); ++i) {
      used.assign(n + 2, 0);
      for (UeIndex v : graph.adjacency[holders[i]]) used[c.color[v]] = 1;
      int k = 1;
      while (used[k]) ++k;
      next[i] = std::min(k, t);  // keep the color when nothing smaller is free
    }
    for (std::size_t i = 0; i < holders.size(); ++i) c.color[holders[i]] = next[i];
  }

  std::set<int> distinct(c.color.begin(), c.color.end());
  c.num_colors = static_cast<int>(distinct.size());
  return c;
}

namespace {

// Three mutually overlapping cells; the middle cell's users all sit in
// overlap regions, so it can drain and sleep. The left/right exclusive
// groups are outside each other's two-tier neighbourhood, which is what
// gives the color-parallel updates their speedup.
constexpr const char* kSimpleTopologyText = R"(# simple 3-FBS / 11-UE layout
fbs 1 0.0 0.0 10.0
fbs 2 12.0 0.0 10.0
fbs 3 6.0 10.0 10.0

ue 1 -4.0 2.0 gbr 10.0
ue 2 -2.0 -4.0 nongbr 20.0
ue 3 -6.0 -2.0 gbr 10.0
ue 4 2.0 -5.0 nongbr 20.0
ue 5 6.0 -2.0 nongbr 20.0
ue 6 5.0 -1.0 gbr 10.0
ue 7 9.0 5.0 nongbr 20.0
ue 8 4.0 14.0 nongbr 20.0
ue 9 8.0 13.0 gbr 10.0
ue 10 2.0 12.0 gbr 10.0
ue 11 10.0 12.0 nongbr 20.0
)";

}  // namespace

Topology simple_topology() { return parse_topology_text(kSimpleTopologyText, "<builtin>"); }

Topology grid_topology(const GridSpec& spec, std::uint64_t seed) {
  if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("grid: rows/cols must be >= 1");
  if (!(spec.spacing_m > 0)) throw std::invalid_argument("grid: spacing must be > 0");
  if (!(spec.range_m > 0)) throw std::invalid_argument("grid: range must be > 0");
  if (spec.ues_per_circle < 1 || spec.gbr_per_circle < 0 ||
      spec.gbr_per_circle > spec.ues_per_circle)
    throw std::invalid_argument("grid: bad UE counts");
  if (spec.alternate_circles && spec.alternate_gbr_mix)
    throw std::invalid_argument("grid: alternate_circles and alternate_gbr_mix are exclusive");

  Rng rng = Rng(seed).split(0x746f706fu);  // placement stream
  std::vector<FbsNode> fbs;
  std::vector<UeNode> ues;
  const double half_side = spec.range_m / std::sqrt(2.0);  // inscribed square
  int next_ue_id = 1;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int fbs_id = r * spec.cols + c + 1;
      const double cx = c * spec.spacing_m;
      const double cy = r * spec.spacing_m;
      fbs.push_back(FbsNode{fbs_id, cx, cy, spec.range_m});
      const bool checkerboard = (r + c) % 2 == 0;
      if (spec.alternate_circles && !checkerboard) continue;
      const bool carries_gbr = !spec.alternate_gbr_mix || checkerboard;
      for (int k = 0; k < spec.ues_per_circle; ++k) {
        const double x = cx + (2.0 * rng.next_double() - 1.0) * half_side;
        const double y = cy + (2.0 * rng.next_double() - 1.0) * half_side;
        const BearerClass bearer = carries_gbr && k < spec.gbr_per_circle
                                       ? BearerClass::gbr(spec.gbr_demand_mbps)
                                       : BearerClass::non_gbr(spec.non_gbr_cap_mbps);
        ues.push_back(UeNode{next_ue_id++, x, y, bearer});
      }
    }
  }
  return Topology::build(std::move(fbs), std::move(ues));
}

Topology parse_topology_text(const std::string& text, const std::string& context) {
  std::vector<FbsNode> fbs;
  std::vector<UeNode> ues;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument(context + ":" + std::to_string(line_no) + ": " + what);
    };
    if (kind == "fbs") {
      FbsNode n;
      if (!(ls >> n.id >> n.x >> n.y >> n.range_m)) fail("expected: fbs <id> <x> <y> <range_m>");
      fbs.push_back(n);
    } else if (kind == "ue") {
      UeNode n;
      std::string bearer;
      double rate = 0;
      if (!(ls >> n.id >> n.x >> n.y >> bearer >> rate))
        fail("expected: ue <id> <x> <y> <gbr|nongbr> <rate_mbps>");
      if (bearer == "gbr")
        n.bearer = BearerClass::gbr(rate);
      else if (bearer == "nongbr")
        n.bearer = BearerClass::non_gbr(rate);
      else
        fail("unknown bearer '" + bearer + "' (expected gbr or nongbr)");
      ues.push_back(n);
    } else {
      fail("unknown record '" + kind + "' (expected fbs or ue)");
    }
  }
  return Topology::build(std::move(fbs), std::move(ues));
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_topology_text(buf.str(), path);
}

std::string format_topology_text(const Topology& topo) {
  std::ostringstream out;
  char buf[160];
  for (const FbsNode& b : topo.fbs_nodes()) {
    std::snprintf(buf, sizeof buf, "fbs %d %.10g %.10g %.10g\n", b.id, b.x, b.y, b.range_m);
    out << buf;
  }
  for (const UeNode& u : topo.ue_nodes()) {
    std::snprintf(buf, sizeof buf, "ue %d %.10g %.10g %s %.10g\n", u.id, u.x, u.y,
                  u.bearer.is_gbr() ? "gbr" : "nongbr", u.bearer.rate_mbps);
    out << buf;
  }
  return out.str();
}

void save_topology(const Topology& topo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write topology file: " + path);
  out << format_topology_text(topo);
}

}  // namespace femto
