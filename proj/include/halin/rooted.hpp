#pragma once

#include <stdexcept>
#include <vector>

#include "halin/halin_graph.hpp"

namespace halin {

// The plane tree re-rooted at its smallest-id leaf. Children keep the
// rotation order of the embedding, so the leaves of every subtree form a
// contiguous stretch of the cycle, read left to right.
struct RootedView {
  int root = -1;
  std::vector<int> parent;
  std::vector<int> parent_edge;
  std::vector<std::vector<int>> children;
  std::vector<int> postorder;  // every vertex except the root
  std::vector<int> leftmost;   // first leaf of the subtree
  std::vector<int> rightmost;  // last leaf of the subtree
  std::vector<int> prev_edge;  // cycle edge entering a leaf from the left
  std::vector<int> next_edge;  // cycle edge leaving a leaf to the right

  bool is_leaf(int v) const { return children[v].empty(); }
};

inline RootedView make_rooted_view(const HalinGraph& g) {
  const PlaneTree& t = g.tree();
  const int n = t.size();
  RootedView r;
  for (int v : t.leaves())
    if (r.root < 0 || t.id(v) < t.id(r.root)) r.root = v;

  // Rotation around v in the embedding: parent first, then children.
  auto rotation = [&](int v) {
    std::vector<int> rot;
    if (t.parent(v) >= 0) rot.push_back(t.parent(v));
    for (int c : t.children(v)) rot.push_back(c);
    return rot;
  };
  auto tree_edge = [&](int a, int b) { return t.parent(a) == b ? g.parent_edge(a) : g.parent_edge(b); };

  r.parent.assign(n, -1);
  r.parent_edge.assign(n, -1);
  r.children.assign(n, {});
  std::vector<int> preorder;
  std::vector<int> stack{r.root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    preorder.push_back(v);
    const auto rot = rotation(v);
    std::size_t start = 0;
    if (r.parent[v] >= 0) {
      while (rot[start] != r.parent[v]) ++start;
      ++start;
    }
    for (std::size_t i = 0; i < rot.size(); ++i) {
      const int c = rot[(start + i) % rot.size()];
      if (c == r.parent[v]) continue;
      r.children[v].push_back(c);
      r.parent[c] = v;
      r.parent_edge[c] = tree_edge(c, v);
    }
    for (auto it = r.children[v].rbegin(); it != r.children[v].rend(); ++it) stack.push_back(*it);
  }

  r.leftmost.assign(n, -1);
  r.rightmost.assign(n, -1);
  for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
    const int v = *it;
    if (r.children[v].empty()) {
      r.leftmost[v] = r.rightmost[v] = v;
    } else {
      r.leftmost[v] = r.leftmost[r.children[v].front()];
      r.rightmost[v] = r.rightmost[r.children[v].back()];
    }
    if (v != r.root) r.postorder.push_back(v);
  }

  const int len = g.cycle_length();
  r.prev_edge.assign(n, -1);
  r.next_edge.assign(n, -1);
  for (int v : t.leaves()) {
    const int pos = g.cycle_position(v);
    r.prev_edge[v] = g.cycle_edge((pos + len - 1) % len);
    r.next_edge[v] = g.cycle_edge(pos);
  }
  // Sibling subtrees must be cycle-consecutive in the same direction.
  for (int v = 0; v < n; ++v) {
    const auto& kids = r.children[v];
    for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
      if (g.cycle_position(r.leftmost[kids[i + 1]]) != (g.cycle_position(r.rightmost[kids[i]]) + 1) % len)
        throw std::logic_error("re-rooted embedding does not follow the leaf cycle");
    }
  }
  return r;
}

}  // namespace halin
