#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "halin/errors.hpp"
#include "halin/graph.hpp"

namespace halin {

struct NodeDescription {
  int id = 0;
  std::vector<int> children;
};

// Raw instance as read from a file: ids are arbitrary integers.
struct TreeDescription {
  int root = 0;
  std::vector<NodeDescription> nodes;
};

enum class EdgeKind { Tree, Cycle };

struct Edge {
  int index = 0;
  EdgeKind kind = EdgeKind::Tree;
  int u = 0;  // dense vertex; for tree edges the parent
  int v = 0;  // dense vertex; for tree edges the child
};

// Validated rooted plane tree. Vertices are dense indices 0..n-1 in DFS
// pre-order; the original ids are kept for I/O.
class PlaneTree {
 public:
  static PlaneTree from_description(const TreeDescription& desc);

  int size() const { return static_cast<int>(ids_.size()); }
  int root() const { return 0; }
  int id(int v) const { return ids_[v]; }
  int index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorKind::UnknownVertex, "vertex id " + std::to_string(id));
    return it->second;
  }
  bool contains(int id) const { return index_.count(id) != 0; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  int parent(int v) const { return parent_[v]; }
  int degree(int v) const { return static_cast<int>(children_[v].size()) + (parent_[v] >= 0 ? 1 : 0); }
  bool is_leaf(int v) const { return degree(v) == 1; }
  // Leaves in DFS pre-order of the embedding.
  const std::vector<int>& leaves() const { return leaves_; }
  int internal_count() const { return size() - static_cast<int>(leaves_.size()); }

  TreeDescription description() const {
    TreeDescription desc;
    desc.root = ids_[0];
    desc.nodes.reserve(ids_.size());
    for (int v = 0; v < size(); ++v) {
      NodeDescription node{ids_[v], {}};
      for (int c : children_[v]) node.children.push_back(ids_[c]);
      desc.nodes.push_back(std::move(node));
    }
    return desc;
  }

 private:
  std::vector<int> ids_;
  std::unordered_map<int, int> index_;
  std::vector<std::vector<int>> children_;
  std::vector<int> parent_;
  std::vector<int> leaves_;
};

inline PlaneTree PlaneTree::from_description(const TreeDescription& desc) {
  std::unordered_map<int, int> slot;  // id -> position in desc.nodes
  for (std::size_t i = 0; i < desc.nodes.size(); ++i) {
    if (!slot.emplace(desc.nodes[i].id, static_cast<int>(i)).second)
      throw Error(ErrorKind::MalformedTree, "duplicate id " + std::to_string(desc.nodes[i].id));
  }
  if (!slot.count(desc.root)) throw Error(ErrorKind::MalformedTree, "missing root " + std::to_string(desc.root));

  PlaneTree t;
  std::vector<char> seen(desc.nodes.size(), 0);
  // Iterative pre-order walk; children pushed in reverse so the first child pops first.
  std::vector<std::pair<int, int>> stack{{slot[desc.root], -1}};
  while (!stack.empty()) {
    auto [s, par] = stack.back();
    stack.pop_back();
    if (seen[s]) throw Error(ErrorKind::MalformedTree, "id " + std::to_string(desc.nodes[s].id) + " reached twice");
    seen[s] = 1;
    const int v = static_cast<int>(t.ids_.size());
    t.ids_.push_back(desc.nodes[s].id);
    t.index_[desc.nodes[s].id] = v;
    t.parent_.push_back(par);
    t.children_.emplace_back();
    if (par >= 0) t.children_[par].push_back(v);
    const auto& kids = desc.nodes[s].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      auto found = slot.find(*it);
      if (found == slot.end()) throw Error(ErrorKind::MalformedTree, "unknown child id " + std::to_string(*it));
      stack.emplace_back(found->second, v);
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw Error(ErrorKind::MalformedTree, "id " + std::to_string(desc.nodes[i].id) + " unreachable from root");

  for (int v = 0; v < t.size(); ++v) {
    if (t.degree(v) == 2) throw Error(ErrorKind::DegreeTwoVertex, "vertex id " + std::to_string(t.ids_[v]));
    if (t.degree(v) <= 1) t.leaves_.push_back(v);
  }
  if (t.leaves_.size() < 3 || t.internal_count() < 1)
    throw Error(ErrorKind::TooFewLeaves, std::to_string(t.leaves_.size()) + " leaves");
  return t;
}

// Plane tree plus the leaf cycle. Tree edges come first in DFS order (the edge
// to a child is indexed when the child is visited), then cycle edges where
// cycle edge i joins cycle position i to position i+1 (mod L).
class HalinGraph {
 public:
  explicit HalinGraph(PlaneTree tree) : tree_(std::move(tree)), graph_(tree_.size()) {
    const int n = tree_.size();
    parent_edge_.assign(n, -1);
    // Dense indices are already pre-order, so visiting v = 1..n-1 is DFS order.
    for (int v = 1; v < n; ++v) {
      const int e = graph_.add_edge(tree_.parent(v), v);
      edges_.push_back({e, EdgeKind::Tree, tree_.parent(v), v});
      parent_edge_[v] = e;
    }
    tree_edges_ = n - 1;
    const auto& cyc = tree_.leaves();
    const int len = static_cast<int>(cyc.size());
    cycle_pos_.assign(n, -1);
    for (int i = 0; i < len; ++i) cycle_pos_[cyc[i]] = i;
    for (int i = 0; i < len; ++i) {
      const int a = cyc[i], b = cyc[(i + 1) % len];
      const int e = graph_.add_edge(a, b);
      edges_.push_back({e, EdgeKind::Cycle, a, b});
    }
    graph_.finalize();
  }

  const PlaneTree& tree() const { return tree_; }
  const SimpleGraph& graph() const { return graph_; }
  const std::vector<int>& cycle() const { return tree_.leaves(); }
  int cycle_length() const { return static_cast<int>(tree_.leaves().size()); }
  int cycle_position(int v) const { return cycle_pos_[v]; }
  // Cycle edge leaving cycle position i towards position i+1.
  int cycle_edge(int pos) const { return tree_edges_ + pos; }
  int vertex_count() const { return tree_.size(); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int tree_edge_count() const { return tree_edges_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const {
    graph_.check_edge(e);
    return edges_[e];
  }
  int parent_edge(int v) const { return parent_edge_[v]; }
  int degree_of(int v) const { return graph_.degree(v); }
  int max_degree() const { return graph_.max_degree(); }

  // Every internal tree vertex has tree-degree 3 (leaves always have degree 3 in G).
  bool is_cubic() const {
    for (int v = 0; v < vertex_count(); ++v)
      if (graph_.degree(v) != 3) return false;
    return true;
  }

  // Subgraph formed by the tree edges only, same dense vertices and edge indices.
  SimpleGraph tree_graph() const {
    SimpleGraph g(vertex_count());
    for (int e = 0; e < tree_edges_; ++e) g.add_edge(edges_[e].u, edges_[e].v);
    g.finalize();
    return g;
  }

 private:
  PlaneTree tree_;
  SimpleGraph graph_;
  std::vector<Edge> edges_;
  std::vector<int> parent_edge_;
  std::vector<int> cycle_pos_;
  int tree_edges_ = 0;
};

inline HalinGraph validate(const TreeDescription& desc) { return HalinGraph(PlaneTree::from_description(desc)); }

inline int degree(const HalinGraph& g, int id) { return g.degree_of(g.tree().index_of(id)); }

inline int tree_degree(const HalinGraph& g, int id) { return g.tree().degree(g.tree().index_of(id)); }

}  // namespace halin
