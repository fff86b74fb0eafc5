#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "halin/errors.hpp"

namespace halin {

// Undirected simple graph on dense vertices 0..n-1 with indexed edges.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  explicit SimpleGraph(int n) : incident_(static_cast<std::size_t>(n)), nbrs_(static_cast<std::size_t>(n)) {}

  SimpleGraph(int n, const std::vector<std::pair<int, int>>& edges) : SimpleGraph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
    finalize();
  }

  int add_edge(int u, int v) {
    const int n = vertex_count();
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw Error(ErrorKind::InvalidEdge, "bad endpoints (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    const int idx = static_cast<int>(edges_.size());
    edges_.emplace_back(u, v);
    incident_[u].push_back(idx);
    incident_[v].push_back(idx);
    nbrs_[u].push_back(v);
    nbrs_[v].push_back(u);
    return idx;
  }

  // Sorts neighbour lists so adjacency tests are logarithmic.
  void finalize() {
    for (auto& list : nbrs_) std::sort(list.begin(), list.end());
  }

  int vertex_count() const { return static_cast<int>(incident_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::pair<int, int> edge(int e) const {
    check_edge(e);
    return edges_[e];
  }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }

  bool adjacent(int u, int v) const {
    const auto& list = nbrs_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  int max_degree() const {
    int best = 0;
    for (const auto& list : incident_) best = std::max(best, static_cast<int>(list.size()));
    return best;
  }

  void check_edge(int e) const {
    if (e < 0 || e >= edge_count()) throw Error(ErrorKind::InvalidEdge, "edge index " + std::to_string(e));
  }

 private:
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> nbrs_;
};

}  // namespace halin
