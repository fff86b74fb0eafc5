#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "halin/errors.hpp"
#include "halin/graph.hpp"
#include "halin/halin_graph.hpp"

namespace halin {

// colors[e] is the colour of edge e, or -1 while uncoloured.
struct EdgeColoring {
  int palette = 0;
  std::vector<int> colors;

  bool complete() const {
    return std::all_of(colors.begin(), colors.end(), [](int c) { return c >= 0; });
  }
  int distinct_colors() const {
    std::set<int> used(colors.begin(), colors.end());
    used.erase(-1);
    return static_cast<int>(used.size());
  }
};

// Two distinct edges conflict when they share an endpoint or an edge joins an
// endpoint of one to an endpoint of the other.
inline bool edges_conflict(const SimpleGraph& g, int e, int f) {
  g.check_edge(e);
  g.check_edge(f);
  if (e == f) throw Error(ErrorKind::InvalidArgument, "edge compared with itself");
  auto [a, b] = g.edge(e);
  auto [c, d] = g.edge(f);
  if (a == c || a == d || b == c || b == d) return true;
  return g.adjacent(a, c) || g.adjacent(a, d) || g.adjacent(b, c) || g.adjacent(b, d);
}

inline bool edges_conflict(const HalinGraph& g, int e, int f) { return edges_conflict(g.graph(), e, f); }

class ConflictGraph {
 public:
  ConflictGraph() = default;
  explicit ConflictGraph(std::vector<std::vector<int>> adj) : adj_(std::move(adj)) {}

  int size() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int e) const { return adj_[e]; }
  bool conflicts(int e, int f) const { return std::binary_search(adj_[e].begin(), adj_[e].end(), f); }
  std::size_t pair_count() const {
    std::size_t total = 0;
    for (const auto& a : adj_) total += a.size();
    return total / 2;
  }

 private:
  std::vector<std::vector<int>> adj_;
};

// Edges within distance one of e are exactly the edges incident to N[u] or N[v]
// for e = (u, v), so each list is collected from that neighbourhood.
inline ConflictGraph build_conflict_graph(const SimpleGraph& g) {
  std::vector<std::vector<int>> adj(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    auto& list = adj[e];
    auto [u, v] = g.edge(e);
    for (int end : {u, v}) {
      for (int f : g.incident(end)) list.push_back(f);
      for (int w : g.neighbors(end))
        for (int f : g.incident(w)) list.push_back(f);
    }
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    list.erase(std::remove(list.begin(), list.end(), e), list.end());
  }
  return ConflictGraph(std::move(adj));
}

inline ConflictGraph build_conflict_graph(const HalinGraph& g) { return build_conflict_graph(g.graph()); }

struct VerifyResult {
  bool ok = true;
  // (e, f) with e < f for a clashing pair; (e, e) marks a colour outside the palette.
  std::vector<std::pair<int, int>> violations;
};

inline VerifyResult verify_strong_coloring(const SimpleGraph& g, const EdgeColoring& c) {
  if (static_cast<int>(c.colors.size()) != g.edge_count() || !c.complete())
    throw Error(ErrorKind::IncompleteColoring, "every edge needs a colour");
  VerifyResult result;
  const ConflictGraph cg = build_conflict_graph(g);
  for (int e = 0; e < cg.size(); ++e) {
    if (c.colors[e] >= c.palette) {
      result.ok = false;
      result.violations.emplace_back(e, e);
    }
    for (int f : cg.neighbors(e))
      if (e < f && c.colors[e] == c.colors[f]) result.violations.emplace_back(e, f);
  }
  if (!result.violations.empty()) result.ok = false;
  return result;
}

inline VerifyResult verify_strong_coloring(const HalinGraph& g, const EdgeColoring& c) {
  return verify_strong_coloring(g.graph(), c);
}

inline std::string format_violations(const VerifyResult& r) {
  std::string out;
  for (auto [e, f] : r.violations) {
    if (!out.empty()) out += ' ';
    out += "(" + std::to_string(e) + ", " + std::to_string(f) + ")";
  }
  return out;
}

}  // namespace halin
