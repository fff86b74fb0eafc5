#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "halin/errors.hpp"
#include "halin/graph.hpp"
#include "halin/halin_graph.hpp"

namespace halin {

struct BoundReport {
  int tree_sei = 0;
  int lower_bound = 0;
  int upper_eq1 = 0;  // tree value plus the value of the leaf cycle
  int upper_eq2 = 0;  // 2 * max degree + 4
};

inline int cycle_sei(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "cycle needs n >= 3");
  if (n % 3 == 0) return 3;
  return n == 5 ? 5 : 4;
}

inline int wheel_sei(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "wheel needs n >= 3");
  if (n % 3 == 0) return n + 3;
  return n == 5 ? n + 5 : n + 4;
}

// Degrees of the two hubs in G; order of the arguments does not matter.
inline int double_wheel_sei(int dx, int dy) {
  if (dx < 3 || dy < 3) throw Error(ErrorKind::InvalidArgument, "double wheel hub degrees must be >= 3");
  if (dx > dy) std::swap(dx, dy);
  if (dx == 3) return dy == 3 ? 9 : dy + 4;
  return dx + dy;
}

// Max over edges uv of deg(u) + deg(v) - 1; exact for every tree.
inline int tree_sei(const SimpleGraph& tree) {
  if (tree.edge_count() == 0) throw Error(ErrorKind::InvalidArgument, "tree has no edges");
  int best = 0;
  for (auto [u, v] : tree.edges()) best = std::max(best, tree.degree(u) + tree.degree(v) - 1);
  return best;
}

inline int tree_sei(const PlaneTree& t) {
  int best = 0;
  for (int v = 0; v < t.size(); ++v)
    if (t.parent(v) >= 0) best = std::max(best, t.degree(v) + t.degree(t.parent(v)) - 1);
  if (best == 0) throw Error(ErrorKind::InvalidArgument, "tree has no edges");
  return best;
}

inline BoundReport bounds(const HalinGraph& g) {
  BoundReport r;
  r.tree_sei = tree_sei(g.tree());
  r.lower_bound = r.tree_sei;
  r.upper_eq1 = r.tree_sei + cycle_sei(g.cycle_length());
  r.upper_eq2 = 2 * g.max_degree() + 4;
  return r;
}

// Value for graphs whose tree has one internal vertex (wheel) or two (double wheel).
inline std::optional<int> dispatch_closed_form(const HalinGraph& g) {
  const PlaneTree& t = g.tree();
  if (t.internal_count() == 1) return wheel_sei(g.cycle_length());
  if (t.internal_count() == 2) {
    int hubs[2], found = 0;
    for (int v = 0; v < t.size() && found < 2; ++v)
      if (!t.is_leaf(v)) hubs[found++] = v;
    return double_wheel_sei(g.degree_of(hubs[0]), g.degree_of(hubs[1]));
  }
  return std::nullopt;
}

}  // namespace halin
