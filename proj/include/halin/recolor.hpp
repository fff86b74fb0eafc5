#pragma once

#include <algorithm>
#include <vector>

#include "halin/conflict.hpp"

namespace halin {

namespace recolor_detail {

// Completes a partial colouring of `free` edges inside a palette of k colours,
// all other edges fixed. Depth-first with most-constrained edge first.
class Extension {
 public:
  Extension(const ConflictGraph& cg, std::vector<int>& colour, const std::vector<int>& free, int k, long long budget)
      : cg_(cg), colour_(colour), free_(free), k_(k), budget_(budget) {}

  bool run() { return search(0); }

 private:
  std::vector<char> blocked(int e) const {
    std::vector<char> b(static_cast<std::size_t>(k_), 0);
    for (int f : cg_.neighbors(e))
      if (colour_[f] >= 0 && colour_[f] < k_) b[colour_[f]] = 1;
    return b;
  }

  bool search(int done) {
    if (done == static_cast<int>(free_.size())) return true;
    if (++nodes_ > budget_) return false;
    int pick = -1, pick_open = k_ + 1;
    for (int e : free_) {
      if (colour_[e] >= 0) continue;
      const auto b = blocked(e);
      const int open = static_cast<int>(std::count(b.begin(), b.end(), 0));
      if (open < pick_open) {
        pick = e;
        pick_open = open;
      }
    }
    if (pick_open == 0) return false;
    const auto b = blocked(pick);
    for (int c = 0; c < k_; ++c) {
      if (b[c]) continue;
      colour_[pick] = c;
      if (search(done + 1)) return true;
      colour_[pick] = -1;
    }
    return false;
  }

  const ConflictGraph& cg_;
  std::vector<int>& colour_;
  const std::vector<int>& free_;
  int k_;
  long long budget_;
  long long nodes_ = 0;
};

}  // namespace recolor_detail

// Repairs clashes and uncoloured edges by recolouring growing conflict
// neighbourhoods around them, keeping every colour below k. Returns false if
// some clash survives.
inline bool repair_coloring(const ConflictGraph& cg, std::vector<int>& colour, int k, int max_radius = 4,
                            long long budget = 20'000) {
  const int n = cg.size();
  auto clashing = [&] {
    std::vector<int> bad;
    for (int e = 0; e < n; ++e) {
      if (colour[e] < 0 || colour[e] >= k) {
        bad.push_back(e);
        continue;
      }
      for (int f : cg.neighbors(e))
        if (colour[e] == colour[f]) {
          bad.push_back(e);
          break;
        }
    }
    return bad;
  };
  std::vector<int> bad = clashing();
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  int stamp = 0;
  while (!bad.empty()) {
    const int seed = bad.front();
    bool fixed = false;
    for (int r = 1; r <= max_radius && !fixed; ++r) {
      // Ball of radius r around seed, taking in every clashing edge met on the way.
      ++stamp;
      std::vector<int> ball{seed}, frontier{seed};
      mark[seed] = stamp;
      for (int d = 0; d < r; ++d) {
        std::vector<int> next;
        for (int e : frontier)
          for (int f : cg.neighbors(e))
            if (mark[f] != stamp) {
              mark[f] = stamp;
              ball.push_back(f);
              next.push_back(f);
            }
        frontier = std::move(next);
      }
      std::vector<int> saved;
      for (int e : ball) saved.push_back(colour[e]);
      for (int e : ball) colour[e] = -1;
      recolor_detail::Extension ext(cg, colour, ball, k, budget);
      if (ext.run()) {
        fixed = true;
      } else {
        for (std::size_t i = 0; i < ball.size(); ++i) colour[ball[i]] = saved[i];
      }
    }
    if (!fixed) return false;
    bad = clashing();
  }
  return true;
}

}  // namespace halin
