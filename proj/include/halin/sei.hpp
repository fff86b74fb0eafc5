#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "halin/closed_form.hpp"
#include "halin/conflict.hpp"
#include "halin/dp_cubic.hpp"
#include "halin/dp_general.hpp"
#include "halin/errors.hpp"
#include "halin/halin_graph.hpp"
#include "halin/oracle.hpp"
#include "halin/rooted.hpp"

namespace halin {

enum class Method { Auto, Closed, Cubic, General, Oracle };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Closed: return "closed";
    case Method::Cubic: return "cubic";
    case Method::General: return "general";
    case Method::Oracle: return "oracle";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::Auto, Method::Closed, Method::Cubic, Method::General, Method::Oracle})
    if (to_string(m) == name) return m;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

struct SeiResult {
  int value = 0;
  std::optional<EdgeColoring> witness;
  Method method = Method::Auto;
  BoundReport bounds;
  std::size_t max_states = 0;  // largest table seen by a DP, 0 otherwise
};

struct SeiOptions {
  bool witness = true;
  bool clamp_cubic_at_nine = false;  // cubic sweep stops at 9 instead of 10
  long long oracle_budget = kDefaultOracleBudget;
};

inline EdgeColoring extract_witness(CubicSolver& solver, int k) { return solver.witness(k); }

namespace sei_detail {

inline void check_witness(const HalinGraph& g, const EdgeColoring& w, int value) {
  const VerifyResult v = verify_strong_coloring(g, w);
  if (!v.ok) throw std::logic_error("witness fails verification: " + format_violations(v));
  if (w.distinct_colors() != value)
    throw std::logic_error("witness uses " + std::to_string(w.distinct_colors()) + " colours, expected " +
                           std::to_string(value));
}

template <class Solver>
SeiResult sweep(const HalinGraph& g, Solver& solver, int last, Method method, const SeiOptions& opt) {
  SeiResult r;
  r.method = method;
  r.bounds = bounds(g);
  for (int k = r.bounds.tree_sei; k <= last; ++k) {
    if (!solver.decide(k)) continue;
    r.value = k;
    r.max_states = solver.stats().max_states;
    if (opt.witness) {
      r.witness = solver.witness(k);
      check_witness(g, *r.witness, k);
    }
    return r;
  }
  throw std::logic_error("no feasible k in [" + std::to_string(r.bounds.tree_sei) + ", " + std::to_string(last) + "]");
}

}  // namespace sei_detail

inline SeiResult sei_cubic(const HalinGraph& g, const SeiOptions& opt = {}) {
  CubicSolver solver(g);
  const int last = std::min(tree_sei(g.tree()) + 5, opt.clamp_cubic_at_nine ? 9 : 10);
  return sei_detail::sweep(g, solver, last, Method::Cubic, opt);
}

inline bool decide_general(const HalinGraph& g, int k) { return GeneralSolver(g).decide(k); }

// The general DP alone, without the closed-form shortcut.
inline SeiResult sei_general_dp(const HalinGraph& g, const SeiOptions& opt = {}) {
  GeneralSolver solver(g);
  return sei_detail::sweep(g, solver, tree_sei(g.tree()) + 5, Method::General, opt);
}

// Wheel or double wheel value. The witness comes from the general DP at that value.
inline SeiResult sei_closed(const HalinGraph& g, const SeiOptions& opt = {}) {
  const std::optional<int> value = dispatch_closed_form(g);
  if (!value) throw Error(ErrorKind::MethodInapplicable, "closed form needs a tree with one or two internal vertices");
  SeiResult r;
  r.method = Method::Closed;
  r.value = *value;
  r.bounds = bounds(g);
  if (opt.witness) {
    GeneralSolver solver(g);
    if (!solver.decide(r.value)) throw std::logic_error("general DP rejects the closed-form value");
    r.witness = solver.witness(r.value);
    sei_detail::check_witness(g, *r.witness, r.value);
  }
  return r;
}

// Closed form for wheels and double wheels, the general DP otherwise.
inline SeiResult sei(const HalinGraph& g, const SeiOptions& opt = {}) {
  if (dispatch_closed_form(g)) return sei_closed(g, opt);
  SeiResult r = sei_general_dp(g, opt);
#ifndef NDEBUG
  if (g.is_cubic()) {
    SeiOptions quiet = opt;
    quiet.witness = false;
    if (sei_cubic(g, quiet).value != r.value) throw std::logic_error("general and cubic DP disagree");
  }
#endif
  return r;
}

inline SeiResult sei_oracle(const HalinGraph& g, const SeiOptions& opt = {}) {
  OracleResult o = sei_exact(g, opt.oracle_budget);
  SeiResult r;
  r.method = Method::Oracle;
  r.value = o.value;
  r.bounds = bounds(g);
  if (opt.witness) r.witness = std::move(o.witness);
  return r;
}

// Auto picks the closed form, then the cubic DP, then the general DP.
inline SeiResult compute_sei(const HalinGraph& g, Method method, const SeiOptions& opt = {}) {
  switch (method) {
    case Method::Auto:
      if (dispatch_closed_form(g)) return sei_closed(g, opt);
      return g.is_cubic() ? sei_cubic(g, opt) : sei_general_dp(g, opt);
    case Method::Closed: return sei_closed(g, opt);
    case Method::Cubic:
      if (!g.is_cubic()) throw Error(ErrorKind::MethodInapplicable, "cubic method needs every internal vertex of degree 3");
      return sei_cubic(g, opt);
    case Method::General: return sei_general_dp(g, opt);
    case Method::Oracle: return sei_oracle(g, opt);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown method");
}

// Boundary of the scope of x split by type: 1 child edges of x, 2 the parent
// edge, 3 and 5 the cycle edges leaving the scope at its first and last leaf,
// 4 and 6 the other scope edges at those two leaves.
struct TypedBoundary {
  std::vector<int> type1;
  std::optional<int> type2, type3, type5;
  std::vector<int> type4, type6;

  std::vector<int> of_type(int i) const {
    auto one = [](const std::optional<int>& e) { return e ? std::vector<int>{*e} : std::vector<int>{}; };
    switch (i) {
      case 1: return type1;
      case 2: return one(type2);
      case 3: return one(type3);
      case 4: return type4;
      case 5: return one(type5);
      case 6: return type6;
    }
    throw Error(ErrorKind::InvalidArgument, "edge types run from 1 to 6");
  }
};

inline TypedBoundary typed_boundary(const HalinGraph& g, int vertex_id) {
  const int x = g.tree().index_of(vertex_id);
  const RootedView view = make_rooted_view(g);
  if (x == view.root) throw Error(ErrorKind::InvalidArgument, "the root leaf has no scope");
  TypedBoundary b;
  for (int c : view.children[x]) b.type1.push_back(view.parent_edge[c]);
  b.type2 = view.parent_edge[x];
  const int y = view.leftmost[x], z = view.rightmost[x];
  b.type3 = view.prev_edge[y];
  b.type5 = view.next_edge[z];
  auto claimed = [&](int e) {
    return e == *b.type2 || e == *b.type3 || e == *b.type5 ||
           std::find(b.type1.begin(), b.type1.end(), e) != b.type1.end();
  };
  for (int e : {view.parent_edge[y], view.next_edge[y]})
    if (!claimed(e) && y != x) b.type4.push_back(e);
  for (int e : {view.parent_edge[z], view.prev_edge[z]})
    if (!claimed(e) && z != x && std::find(b.type4.begin(), b.type4.end(), e) == b.type4.end()) b.type6.push_back(e);
  return b;
}

// |W(S)| for every nonempty S of the six types, where W(S) is the set of
// colours used by each type in S. Entry s - 1 belongs to the bitmask s.
inline std::vector<int> signature(const TypedBoundary& b, const EdgeColoring& c) {
  std::array<std::set<int>, 6> used;
  for (int i = 1; i <= 6; ++i)
    for (int e : b.of_type(i)) {
      if (e < 0 || e >= static_cast<int>(c.colors.size()) || c.colors[e] < 0)
        throw Error(ErrorKind::IncompleteColoring, "edge " + std::to_string(e) + " has no colour");
      used[i - 1].insert(c.colors[e]);
    }
  std::vector<int> out(63, 0);
  for (int s = 1; s < 64; ++s) {
    int first = 0;
    while (!(s >> first & 1)) ++first;
    int count = 0;
    for (int colour : used[first]) {
      bool everywhere = true;
      for (int i = first + 1; i < 6 && everywhere; ++i)
        if ((s >> i & 1) && !used[i].count(colour)) everywhere = false;
      count += everywhere;
    }
    out[s - 1] = count;
  }
  return out;
}

}  // namespace halin
