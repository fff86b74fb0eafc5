#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "halin/closed_form.hpp"
#include "halin/conflict.hpp"
#include "halin/dp_engine.hpp"
#include "halin/errors.hpp"
#include "halin/halin_graph.hpp"
#include "halin/rooted.hpp"

namespace halin {

struct SubtreeScope {
  int x = 0;                  // vertex id
  std::vector<int> boundary;  // distinct edge indices, role order
  int first_leaf = 0;         // ends of the cycle path covered by the subtree (ids)
  int last_leaf = 0;
};

namespace cubic_detail {

// Boundary roles: parent edge, the two child edges, then for the leftmost leaf
// y its incoming cycle edge, tree edge and outgoing cycle edge, and for the
// rightmost leaf z its outgoing cycle edge, tree edge and incoming cycle edge.
enum Role { P, A1, A2, CL, TY, NY, CR, TZ, PZ, kRoles };

using Roles = std::array<int, kRoles>;

inline Roles roles_of(const RootedView& r, int x) {
  Roles b{};
  const int y = r.leftmost[x], z = r.rightmost[x];
  b[P] = r.parent_edge[x];
  if (r.is_leaf(x)) {
    b[A1] = b[A2] = -1;
  } else {
    b[A1] = r.parent_edge[r.children[x][0]];
    b[A2] = r.parent_edge[r.children[x][1]];
  }
  b[CL] = r.prev_edge[y];
  b[TY] = r.parent_edge[y];
  b[NY] = r.next_edge[y];
  b[CR] = r.next_edge[z];
  b[TZ] = r.parent_edge[z];
  b[PZ] = r.prev_edge[z];
  return b;
}

inline std::vector<int> distinct(const Roles& b) {
  std::vector<int> out;
  for (int e : b)
    if (e >= 0 && std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  return out;
}

}  // namespace cubic_detail

struct CubicStats {
  std::size_t max_states = 0;
  std::size_t merges = 0;
  std::size_t memo_hits = 0;
  std::size_t distinct_tables = 0;
};

class CubicSolver {
 public:
  // Keeps a reference to g, so temporaries are rejected.
  explicit CubicSolver(HalinGraph&&) = delete;
  explicit CubicSolver(const HalinGraph& g) : g_(g) {
    if (!g.is_cubic()) throw Error(ErrorKind::NotCubic, "some internal vertex has degree other than 3");
    view_ = make_rooted_view(g);
    roles_.resize(g.vertex_count());
    for (int v : view_.postorder) roles_[v] = cubic_detail::roles_of(view_, v);
  }

  const RootedView& view() const { return view_; }

  bool decide(int k) {
    using namespace cubic_detail;
    node_table_.assign(g_.vertex_count(), -1);
    decided_k_ = -1;
    if (k < 3) return false;
    const engine::Code leaf_code = engine::Code{1} << 4 | engine::Code{2} << 8;
    const int leaf_table = intern({leaf_code});
    for (int x : view_.postorder) {
      if (view_.is_leaf(x)) {
        node_table_[x] = leaf_table;
        continue;
      }
      node_table_[x] = merge(x, k);
      if (tables_[node_table_[x]].empty()) return false;
    }
    const int top = view_.children[view_.root][0];
    if (tables_[node_table_[top]].empty()) return false;
    decided_k_ = k;
    return true;
  }

  // A strong colouring with at most k colours, read back from the tables of
  // the last successful decide(k).
  EdgeColoring witness(int k) {
    if (decided_k_ != k) throw Error(ErrorKind::NoWitness, "no successful decision at k = " + std::to_string(k));
    std::vector<int> colour(static_cast<std::size_t>(g_.edge_count()), -1);
    const int top = view_.children[view_.root][0];
    const engine::Code code = tables_[node_table_[top]].front();
    // Seed B(top) with distinct colours per class.
    const auto slots = cubic_detail::distinct(roles_[top]);
    for (std::size_t i = 0; i < slots.size(); ++i) colour[slots[i]] = pattern_code::label_at(code, static_cast<int>(i));
    std::vector<std::pair<int, engine::Code>> todo{{top, code}};
    while (!todo.empty()) {
      auto [x, c] = todo.back();
      todo.pop_back();
      if (!view_.is_leaf(x)) unfold(x, c, k, colour, todo);
    }
    traces_.clear();
    return EdgeColoring{k, std::move(colour)};
  }

  const CubicStats& stats() const { return stats_; }

 private:
  int intern(std::vector<engine::Code> codes) {
    std::string key(reinterpret_cast<const char*>(codes.data()), codes.size() * sizeof(engine::Code));
    auto [it, fresh] = intern_.emplace(std::move(key), static_cast<int>(tables_.size()));
    if (fresh) {
      stats_.max_states = std::max(stats_.max_states, codes.size());
      tables_.push_back(std::move(codes));
      stats_.distinct_tables = tables_.size();
    }
    return it->second;
  }

  // Local view of the merge at x: the universe, the three boundaries and the
  // staged introduce / keep lists.
  struct MergePlan {
    engine::Universe u;
    std::string key;
    std::vector<int> sx, sy, sz;
    std::vector<int> intro_y, keep_y, intro_z, keep_z;
    int ty = -1, tz = -1;
  };

  MergePlan plan(int x, int k) const {
    using namespace cubic_detail;
    MergePlan p;
    const int yc = view_.children[x][0], zc = view_.children[x][1];
    auto local_list = [&](const Roles& b) {
      std::vector<int> out;
      for (int e : b) {
        const int id = e < 0 ? -1 : p.u.add(g_.graph(), e);
        p.key.push_back(static_cast<char>(id));
        if (id >= 0 && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
      }
      return out;
    };
    p.sx = local_list(roles_[x]);
    p.sy = local_list(roles_[yc]);
    p.sz = local_list(roles_[zc]);
    for (engine::Mask m : p.u.conflict) p.key.append(reinterpret_cast<const char*>(&m), sizeof m);
    p.ty = node_table_[yc];
    p.tz = node_table_[zc];
    p.key.append(reinterpret_cast<const char*>(&p.ty), sizeof p.ty);
    p.key.append(reinterpret_cast<const char*>(&p.tz), sizeof p.tz);
    p.key.push_back(static_cast<char>(k));

    const int nu = static_cast<int>(p.u.edges.size());
    auto mask_of = [](const std::vector<int>& v) {
      engine::Mask m = 0;
      for (int e : v) m |= engine::bit(e);
      return m;
    };
    auto list_of = [&](engine::Mask m) {
      std::vector<int> out;
      for (int e = 0; e < nu; ++e)
        if (m & engine::bit(e)) out.push_back(e);
      return out;
    };
    auto ordered = [&](engine::Mask m, const std::vector<int>& prefer) {
      std::vector<int> out;
      for (int e : prefer)
        if (m & engine::bit(e)) out.push_back(e);
      for (int e : list_of(m & ~mask_of(prefer))) out.push_back(e);
      return out;
    };
    // The y side forgets what only it sees and takes in the x boundary; the z
    // side then forgets what neither x nor the y side still holds.
    const engine::Mask mx = mask_of(p.sx), my = mask_of(p.sy), mz = mask_of(p.sz);
    const engine::Mask forget_y = my & ~mx & ~mz;
    const engine::Mask intro_y = (engine::conflicts_of(p.u, forget_y) & ~my) | (mx & ~my & ~mz);
    const engine::Mask keep_y = (my & ~forget_y) | intro_y;
    const engine::Mask forget_z = mz & ~mx & ~keep_y;
    const engine::Mask intro_z = engine::conflicts_of(p.u, forget_z) & ~mz;
    if (intro_z & forget_y) throw std::logic_error("boundary separation violated");
    p.intro_y = list_of(intro_y);
    p.keep_y = ordered(keep_y, p.sx);
    p.intro_z = list_of(intro_z);
    p.keep_z = ordered((mz & ~forget_z) | intro_z, p.sx);
    return p;
  }

  struct MergeTrace {
    engine::TransformTrace left, right;
    engine::JoinTrace join;
  };

  engine::Table compute(const MergePlan& p, int k, MergeTrace* trace) const {
    const engine::Table left{p.sy, tables_[p.ty]};
    const engine::Table right{p.sz, tables_[p.tz]};
    const engine::Table l = engine::transform(left, p.u, p.intro_y, p.keep_y, k, trace ? &trace->left : nullptr);
    const engine::Table r = engine::transform(right, p.u, p.intro_z, p.keep_z, k, trace ? &trace->right : nullptr);
    return engine::join(l, r, p.u, p.sx, k, trace ? &trace->join : nullptr);
  }

  int merge(int x, int k) {
    MergePlan p = plan(x, k);
    ++stats_.merges;
    if (auto it = memo_.find(p.key); it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    const int id = intern(compute(p, k, nullptr).codes);
    memo_.emplace(std::move(p.key), id);
    return id;
  }

  // Colours the subtree below x given the colours of B(x), which realise
  // `code`. Pushes the two children with their own codes.
  void unfold(int x, engine::Code code, int k, std::vector<int>& colour,
              std::vector<std::pair<int, engine::Code>>& todo) {
    const MergePlan p = plan(x, k);
    auto it = traces_.find(p.key);
    if (it == traces_.end()) {
      MergeTrace t;
      compute(p, k, &t);
      it = traces_.emplace(p.key, std::move(t)).first;
    }
    const MergeTrace& t = it->second;
    const auto js = t.join.find(code);
    if (js == t.join.end()) throw std::logic_error("witness: pattern missing from merge trace");
    const engine::Table l{p.keep_y, {}}, r{p.keep_z, {}};
    engine::colour_classes(engine::replay(l, r, js->second), p.u, colour, k);
    const engine::Table in_y{p.sy, {}}, in_z{p.sz, {}};
    const auto ys = t.left.at(js->second.left);
    const auto zs = t.right.at(js->second.right);
    engine::colour_classes(engine::replay(in_y, p.intro_y, ys), p.u, colour, k);
    engine::colour_classes(engine::replay(in_z, p.intro_z, zs), p.u, colour, k);
    const int yc = view_.children[x][0], zc = view_.children[x][1];
    if (!view_.is_leaf(yc)) todo.emplace_back(yc, ys.input);
    if (!view_.is_leaf(zc)) todo.emplace_back(zc, zs.input);
  }

  const HalinGraph& g_;
  RootedView view_;
  std::vector<cubic_detail::Roles> roles_;
  std::vector<int> node_table_;
  std::vector<std::vector<engine::Code>> tables_;
  std::unordered_map<std::string, int> intern_;
  std::unordered_map<std::string, int> memo_;
  std::unordered_map<std::string, MergeTrace> traces_;
  int decided_k_ = -1;
  CubicStats stats_;
};

// Scopes of every vertex except the root leaf, children before parents.
inline std::vector<SubtreeScope> root_scopes(const HalinGraph& g) {
  if (!g.is_cubic()) throw Error(ErrorKind::NotCubic, "some internal vertex has degree other than 3");
  const RootedView view = make_rooted_view(g);
  const PlaneTree& t = g.tree();
  std::vector<SubtreeScope> out;
  out.reserve(view.postorder.size());
  for (int x : view.postorder)
    out.push_back(SubtreeScope{t.id(x), cubic_detail::distinct(cubic_detail::roles_of(view, x)),
                               t.id(view.leftmost[x]), t.id(view.rightmost[x])});
  return out;
}

inline bool decide_cubic(const HalinGraph& g, int k) { return CubicSolver(g).decide(k); }

}  // namespace halin
