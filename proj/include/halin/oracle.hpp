#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "halin/conflict.hpp"
#include "halin/errors.hpp"
#include "halin/graph.hpp"
#include "halin/halin_graph.hpp"

namespace halin {

struct OracleResult {
  int value = 0;
  EdgeColoring witness;
  long long nodes_explored = 0;
};

inline constexpr long long kDefaultOracleBudget = 20'000'000;

namespace oracle_detail {

using Bits = std::vector<std::uint64_t>;

inline Bits make_bits(int n) { return Bits(static_cast<std::size_t>((n + 63) / 64), 0); }
inline void set_bit(Bits& b, int i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline bool test_bit(const Bits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1U; }
inline int popcount(const Bits& b) {
  int c = 0;
  for (auto w : b) c += std::popcount(w);
  return c;
}
inline bool any(const Bits& b) {
  return std::any_of(b.begin(), b.end(), [](std::uint64_t w) { return w != 0; });
}

inline std::vector<Bits> adjacency_bits(const ConflictGraph& cg) {
  std::vector<Bits> adj(cg.size(), make_bits(cg.size()));
  for (int e = 0; e < cg.size(); ++e)
    for (int f : cg.neighbors(e)) set_bit(adj[e], f);
  return adj;
}

// Maximum clique by branch and bound with a greedy colouring bound. Stops
// exploring after `budget` nodes and keeps the best clique found so far.
class CliqueSearch {
 public:
  CliqueSearch(const ConflictGraph& cg, long long budget) : adj_(adjacency_bits(cg)), n_(cg.size()), budget_(budget) {}

  std::vector<int> run(std::vector<int> seed) {
    best_ = std::move(seed);
    Bits all = make_bits(n_);
    for (int v = 0; v < n_; ++v) set_bit(all, v);
    std::vector<int> current;
    expand(current, all);
    return best_;
  }

 private:
  void expand(std::vector<int>& current, Bits cand) {
    if (++nodes_ > budget_) return;
    // Greedy colour classes over the candidates give an upper bound per vertex.
    std::vector<int> order, bound;
    Bits rest = cand;
    int color = 0;
    while (any(rest)) {
      ++color;
      Bits avail = rest;
      for (int w = 0; w < static_cast<int>(avail.size()); ++w) {
        while (avail[w]) {
          const int v = w * 64 + std::countr_zero(avail[w]);
          order.push_back(v);
          bound.push_back(color);
          rest[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
          for (std::size_t k = 0; k < avail.size(); ++k) avail[k] &= ~adj_[v][k];
          avail[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
        }
      }
    }
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
      if (static_cast<int>(current.size()) + bound[i] <= static_cast<int>(best_.size())) return;
      const int v = order[i];
      current.push_back(v);
      Bits next = cand;
      for (std::size_t k = 0; k < next.size(); ++k) next[k] &= adj_[v][k];
      if (any(next)) {
        expand(current, next);
      } else if (current.size() > best_.size()) {
        best_ = current;
      }
      current.pop_back();
      cand[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
      if (nodes_ > budget_) return;
    }
  }

  std::vector<Bits> adj_;
  int n_;
  long long budget_;
  long long nodes_ = 0;
  std::vector<int> best_;
};

inline std::vector<int> greedy_clique(const ConflictGraph& cg) {
  std::vector<int> best;
  for (int start = 0; start < cg.size(); ++start) {
    std::vector<int> cand = cg.neighbors(start);
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      const auto da = cg.neighbors(a).size(), db = cg.neighbors(b).size();
      return da != db ? da > db : a < b;
    });
    std::vector<int> clique{start};
    for (int v : cand)
      if (std::all_of(clique.begin(), clique.end(), [&](int u) { return cg.conflicts(u, v); })) clique.push_back(v);
    if (clique.size() > best.size()) best = clique;
  }
  return best;
}

// Exact colouring by DSATUR branch and bound. The seed clique is coloured
// first with fixed colours, which removes the colour-permutation symmetry on it.
class ColoringSearch {
 public:
  ColoringSearch(const ConflictGraph& cg, long long budget) : cg_(cg), n_(cg.size()), budget_(budget) {}

  OracleResult run(const std::vector<int>& clique, std::vector<int> upper) {
    const int lower = std::max<int>(1, static_cast<int>(clique.size()));
    best_colors_ = std::move(upper);
    best_ = n_ == 0 ? 0 : *std::max_element(best_colors_.begin(), best_colors_.end()) + 1;
    limit_ = best_ + 1;
    colors_.assign(n_, -1);
    seen_.assign(static_cast<std::size_t>(n_) * limit_, 0);
    sat_.assign(n_, 0);
    lower_ = lower;
    int used = 0;
    for (int v : clique) assign(v, used++);
    if (best_ > lower_) search(static_cast<int>(clique.size()), used);
    OracleResult r;
    r.value = best_;
    r.witness.palette = best_;
    r.witness.colors = best_colors_;
    r.nodes_explored = nodes_;
    return r;
  }

 private:
  void assign(int v, int c) {
    colors_[v] = c;
    for (int u : cg_.neighbors(v))
      if (seen_[u * limit_ + c]++ == 0) ++sat_[u];
  }
  void unassign(int v, int c) {
    colors_[v] = -1;
    for (int u : cg_.neighbors(v))
      if (--seen_[u * limit_ + c] == 0) --sat_[u];
  }

  // Highest saturation, then most uncoloured neighbours, then lowest index.
  int pick() const {
    int best = -1, best_sat = -1, best_deg = -1;
    for (int v = 0; v < n_; ++v) {
      if (colors_[v] >= 0 || sat_[v] < best_sat) continue;
      int deg = 0;
      for (int u : cg_.neighbors(v)) deg += colors_[u] < 0;
      if (sat_[v] > best_sat || deg > best_deg) {
        best = v;
        best_sat = sat_[v];
        best_deg = deg;
      }
    }
    return best;
  }

  void search(int colored, int used) {
    if (++nodes_ > budget_)
      throw Error(ErrorKind::BudgetExceeded, "oracle explored more than " + std::to_string(budget_) + " nodes");
    if (colored == n_) {
      best_ = used;
      best_colors_ = colors_;
      return;
    }
    const int v = pick();
    for (int c = 0; c < used && best_ > lower_; ++c) {
      if (seen_[v * limit_ + c] || used >= best_) continue;
      assign(v, c);
      search(colored + 1, used);
      unassign(v, c);
    }
    if (used + 1 < best_ && best_ > lower_) {
      assign(v, used);
      search(colored + 1, used + 1);
      unassign(v, used);
    }
  }

  const ConflictGraph& cg_;
  int n_;
  long long budget_;
  long long nodes_ = 0;
  int best_ = 0;
  int lower_ = 1;
  int limit_ = 1;
  std::vector<int> best_colors_;
  std::vector<int> colors_;
  std::vector<int> seen_;
  std::vector<int> sat_;
};

inline std::vector<int> dsatur_greedy(const ConflictGraph& cg) {
  const int n = cg.size();
  std::vector<int> colors(n, -1), sat(n, 0);
  std::vector<std::vector<char>> seen(n);
  for (int step = 0; step < n; ++step) {
    int v = -1, best_sat = -1, best_deg = -1;
    for (int u = 0; u < n; ++u) {
      if (colors[u] >= 0) continue;
      int deg = 0;
      for (int w : cg.neighbors(u)) deg += colors[w] < 0;
      if (sat[u] > best_sat || (sat[u] == best_sat && deg > best_deg)) {
        v = u;
        best_sat = sat[u];
        best_deg = deg;
      }
    }
    int c = 0;
    while (c < static_cast<int>(seen[v].size()) && seen[v][c]) ++c;
    colors[v] = c;
    for (int w : cg.neighbors(v)) {
      if (static_cast<int>(seen[w].size()) <= c) seen[w].resize(c + 1, 0);
      if (!seen[w][c]) {
        seen[w][c] = 1;
        ++sat[w];
      }
    }
  }
  return colors;
}

inline SimpleGraph plane_tree_graph(const PlaneTree& t) {
  SimpleGraph g(t.size());
  for (int v = 1; v < t.size(); ++v) g.add_edge(t.parent(v), v);
  g.finalize();
  return g;
}

}  // namespace oracle_detail

// Size of a clique in the conflict graph: exact when the search finishes
// within its node cap, otherwise the largest clique found.
inline int clique_lower_bound(const ConflictGraph& cg, long long budget = 200'000) {
  if (cg.size() == 0) return 0;
  auto seed = oracle_detail::greedy_clique(cg);
  return static_cast<int>(oracle_detail::CliqueSearch(cg, budget).run(std::move(seed)).size());
}

// Number of colours used by the DSATUR greedy colouring.
inline int greedy_color_count(const ConflictGraph& cg) {
  const auto colors = oracle_detail::dsatur_greedy(cg);
  return colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
}

inline OracleResult chromatic_number(const ConflictGraph& cg, long long budget = kDefaultOracleBudget) {
  auto clique = oracle_detail::CliqueSearch(cg, std::min<long long>(budget, 200'000))
                    .run(oracle_detail::greedy_clique(cg));
  return oracle_detail::ColoringSearch(cg, budget).run(clique, oracle_detail::dsatur_greedy(cg));
}

inline OracleResult sei_exact(const SimpleGraph& g, long long budget = kDefaultOracleBudget) {
  return chromatic_number(build_conflict_graph(g), budget);
}

inline OracleResult sei_exact(const HalinGraph& g, long long budget = kDefaultOracleBudget) {
  return sei_exact(g.graph(), budget);
}

// Same search restricted to the tree edges; edge indices match the tree-edge
// prefix of the Halin graph's indexing.
inline OracleResult tree_sei_exact(const PlaneTree& t, long long budget = kDefaultOracleBudget) {
  return sei_exact(oracle_detail::plane_tree_graph(t), budget);
}

inline OracleResult tree_sei_exact(const SimpleGraph& tree, long long budget = kDefaultOracleBudget) {
  return sei_exact(tree, budget);
}

}  // namespace halin
