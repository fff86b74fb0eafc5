#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "halin/errors.hpp"
#include "halin/graph.hpp"
#include "halin/halin_graph.hpp"

namespace halin {

namespace detail {

// Uniform draw in [0, n) that does not depend on the standard library's
// distribution implementation, so seeds reproduce across toolchains.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do r = rng(); while (r >= limit);
  return r % n;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace detail

inline HalinGraph gen_wheel(int n) {
  detail::require(n >= 3, "wheel needs n >= 3");
  TreeDescription d{0, {{0, {}}}};
  for (int i = 1; i <= n; ++i) {
    d.nodes[0].children.push_back(i);
    d.nodes.push_back({i, {}});
  }
  return validate(d);
}

// Hubs 0 and 1 are adjacent; hub 0 has dx-1 leaves, hub 1 has dy-1 leaves.
inline HalinGraph gen_double_wheel(int dx, int dy) {
  detail::require(dx >= 3 && dy >= 3, "double wheel needs both degrees >= 3");
  TreeDescription d{0, {{0, {1}}, {1, {}}}};
  int next = 2;
  for (int i = 0; i < dy - 1; ++i) {
    d.nodes[1].children.push_back(next);
    d.nodes.push_back({next++, {}});
  }
  for (int i = 0; i < dx - 1; ++i) {
    d.nodes[0].children.push_back(next);
    d.nodes.push_back({next++, {}});
  }
  return validate(d);
}

// Caterpillar: spine 0..h-1, ends carry two leaves, interior spine vertices one,
// all leaves hung on the same side of the spine.
inline HalinGraph gen_necklace(int h) {
  detail::require(h >= 2, "necklace needs h >= 2");
  TreeDescription d;
  d.root = 0;
  for (int i = 0; i < h; ++i) d.nodes.push_back({i, {}});
  int next = h;
  auto leaf = [&](int parent) {
    d.nodes[parent].children.push_back(next);
    d.nodes.push_back({next++, {}});
  };
  leaf(0);
  leaf(0);
  d.nodes[0].children.push_back(1);
  for (int i = 1; i + 1 < h; ++i) {
    leaf(i);
    d.nodes[i].children.push_back(i + 1);
  }
  leaf(h - 1);
  leaf(h - 1);
  return validate(d);
}

// Grows K_{1,3} by expanding random leaves into internal vertices. Cubic mode
// always adds two children; general mode adds 2..6 children, capped so the
// leaf count lands exactly on the target.
inline HalinGraph gen_random(std::uint64_t seed, int leaf_target, bool cubic) {
  detail::require(leaf_target >= 3, "random instance needs at least 3 leaves");
  std::mt19937_64 rng(seed);
  TreeDescription d{0, {{0, {1, 2, 3}}, {1, {}}, {2, {}}, {3, {}}}};
  std::vector<int> leaves{1, 2, 3};
  int next = 4;
  while (static_cast<int>(leaves.size()) < leaf_target) {
    const int remaining = leaf_target - static_cast<int>(leaves.size());
    int kids = 2;
    if (!cubic) {
      const int cap = std::min(6, remaining + 1);
      kids = 2 + static_cast<int>(detail::bounded_draw(rng, static_cast<std::uint64_t>(cap - 1)));
    }
    const auto pick = detail::bounded_draw(rng, leaves.size());
    const int v = leaves[pick];
    leaves[pick] = leaves.back();
    leaves.pop_back();
    for (int i = 0; i < kids; ++i) {
      d.nodes[v].children.push_back(next);
      d.nodes.push_back({next, {}});
      leaves.push_back(next++);
    }
  }
  return validate(d);
}

// Uniform random labelled tree on n vertices via a Pruefer sequence.
inline SimpleGraph gen_random_tree(std::uint64_t seed, int n) {
  detail::require(n >= 2, "random tree needs n >= 2");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  if (n == 2) return SimpleGraph(2, {{0, 1}});
  std::vector<int> code(n - 2), deg(n, 1);
  for (int& c : code) {
    c = static_cast<int>(detail::bounded_draw(rng, static_cast<std::uint64_t>(n)));
    ++deg[c];
  }
  for (int c : code) {
    int leaf = 0;
    while (deg[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, c);
    --deg[leaf];
    --deg[c];
  }
  int a = -1;
  for (int v = 0; v < n; ++v) {
    if (deg[v] == 1) {
      if (a < 0) {
        a = v;
      } else {
        edges.emplace_back(a, v);
        break;
      }
    }
  }
  return SimpleGraph(n, edges);
}

}  // namespace halin
