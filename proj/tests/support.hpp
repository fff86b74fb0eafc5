#pragma once

// Instance families shared by the unit tests and the acceptance binary.

#include <functional>
#include <vector>

#include "halin/graph.hpp"

#include "halin/generators.hpp"
#include "halin/halin_graph.hpp"

namespace halin::families {

// Shape of a rooted plane subtree: a leaf, or an ordered list of child shapes.
struct Shape {
  std::vector<Shape> kids;
};

// All plane subtree shapes with exactly `leaves` leaves whose internal nodes
// have between 2 and max_kids children.
inline std::vector<Shape> subtree_shapes(int leaves, int max_kids) {
  std::vector<std::vector<Shape>> by_size(static_cast<std::size_t>(leaves) + 1);
  by_size[1] = {Shape{}};
  for (int n = 2; n <= leaves; ++n) {
    // Ordered sequences of >= 2 shapes with n leaves in total.
    std::function<void(int, std::vector<Shape>&)> grow = [&](int left, std::vector<Shape>& seq) {
      if (left == 0) {
        if (seq.size() >= 2) by_size[n].push_back(Shape{seq});
        return;
      }
      if (static_cast<int>(seq.size()) == max_kids) return;
      for (int part = 1; part <= left; ++part) {
        if (part == n) continue;
        for (const Shape& s : by_size[part]) {
          seq.push_back(s);
          grow(left - part, seq);
          seq.pop_back();
        }
      }
    };
    std::vector<Shape> seq;
    grow(n, seq);
  }
  return by_size[leaves];
}

inline void append_shape(const Shape& s, int parent, TreeDescription& d) {
  const int id = static_cast<int>(d.nodes.size());
  d.nodes.push_back({id, {}});
  d.nodes[parent].children.push_back(id);
  for (const Shape& k : s.kids) append_shape(k, id, d);
}

// Every plane tree without degree-2 vertices with the given leaf count,
// rooted at an internal vertex; rotations of the same embedding may repeat.
// Cubic mode restricts every internal vertex to degree 3.
inline std::vector<HalinGraph> all_halin_graphs(int leaves, bool cubic, int max_degree = 6) {
  std::vector<HalinGraph> out;
  const int root_kids_max = cubic ? 3 : max_degree;
  const int kids_max = cubic ? 2 : max_degree - 1;
  std::function<void(int, std::vector<Shape>&)> grow = [&](int left, std::vector<Shape>& seq) {
    if (left == 0) {
      if (seq.size() >= 3 && (!cubic || seq.size() == 3)) {
        TreeDescription d{0, {{0, {}}}};
        for (const Shape& s : seq) append_shape(s, 0, d);
        out.push_back(validate(d));
      }
      return;
    }
    if (static_cast<int>(seq.size()) == root_kids_max) return;
    for (int part = 1; part <= left; ++part)
      for (const Shape& s : subtree_shapes(part, kids_max)) {
        seq.push_back(s);
        grow(left - part, seq);
        seq.pop_back();
      }
  };
  std::vector<Shape> seq;
  grow(leaves, seq);
  return out;
}

// Backtracking isomorphism test for small graphs.
inline bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
  const int n = a.vertex_count();
  if (n != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> map(n, -1), used(n, 0);
  std::function<bool(int)> place = [&](int v) {
    if (v == n) return true;
    for (int w = 0; w < n; ++w) {
      if (used[w] || a.degree(v) != b.degree(w)) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) ok = a.adjacent(u, v) == b.adjacent(map[u], w);
      if (!ok) continue;
      map[v] = w;
      used[w] = 1;
      if (place(v + 1)) return true;
      used[w] = 0;
    }
    return false;
  };
  return place(0);
}

}  // namespace halin::families
