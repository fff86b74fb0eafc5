#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "halin/dp_engine.hpp"
#include "halin/errors.hpp"
#include "halin/halin_graph.hpp"
#include "halin/recolor.hpp"
#include "halin/rooted.hpp"

namespace halin {

// Boundary of a subtree for arbitrary degrees: up to seven named edges (parent
// edge, then the three cycle-end edges at each extreme leaf) plus an anonymous
// group holding the remaining edges from the subtree root to its children.
// A pattern records the partition of the named edges and which classes also
// hold one anonymous edge; the other anonymous edges have colours of their own.
struct GeneralPattern {
  std::vector<int> labels;
  std::uint32_t anon_flags = 0;  // bit l: class l holds an anonymous edge
  int anon_free = 0;             // anonymous edges in singleton classes

  friend bool operator==(const GeneralPattern&, const GeneralPattern&) = default;
};

namespace general_detail {

enum Role { P, CL, TY, NY, CR, TZ, PZ, kRoles };
using Roles = std::array<int, kRoles>;

inline Roles roles_of(const RootedView& r, int x) {
  const int y = r.leftmost[x], z = r.rightmost[x];
  return {r.parent_edge[x], r.prev_edge[y], r.parent_edge[y], r.next_edge[y],
          r.next_edge[z],   r.parent_edge[z], r.prev_edge[z]};
}

inline void push_unique(std::vector<int>& v, int e) {
  if (e >= 0 && std::find(v.begin(), v.end(), e) == v.end()) v.push_back(e);
}

inline std::vector<int> distinct(const Roles& b) {
  std::vector<int> out;
  for (int e : b) push_unique(out, e);
  return out;
}

inline constexpr std::size_t kMaxSlots = 12;

using engine::bit;
using engine::Code;
using engine::CodeSet;
using engine::conflicts_of;
using engine::Mask;
using engine::Table;
using engine::Universe;
using engine::Work;

inline void check_slots(const std::vector<int>& slots) {
  if (slots.size() > kMaxSlots) throw std::logic_error("boundary stage wider than 12 edges: " + std::to_string(slots.size()));
}

// Moves `e` out of its class; the class keeps the anonymous edge as a flag.
inline void demote(Work& w, int e) {
  const int j = w.where[e];
  if (w.flags & bit(j)) throw std::logic_error("class holds two anonymous edges");
  w.cls[j] &= ~bit(e);
  w.where[e] = -1;
  if (w.cls[j]) w.flags |= bit(j);
}

// Child table prepared for the join. A flag now means "the class conflicts
// with every pooled child edge of the parent"; `hidden` counts colours that
// are in no listed class yet must avoid all of those pooled edges.
struct ChildSide {
  std::vector<int> slots;
  std::vector<std::pair<Code, int>> patterns;  // (labels and flags, hidden)
};

// Introduces parent-side edges into a child table (flags mark classes holding
// one of the child's own pooled edges, `anon` in total), then forgets `drop`.
// `gg` marks edges conflicting with the child's pooled edges, `gx` edges
// conflicting with the parent's.
// Placement of an introduced edge: a class index, or kNewAnon | index for a
// new class that takes one of the free pooled edges.
inline constexpr std::int8_t kNewAnon = 0x40;

struct PrepareSource {
  Code input = 0;
  std::vector<std::int8_t> placed;
};

inline ChildSide prepare_child(const Table& in, const Universe& u, Mask gg, Mask gx, int anon,
                               const std::vector<int>& intro, const std::vector<int>& out, int k,
                               std::vector<PrepareSource>* trace = nullptr) {
  check_slots(out);
  Mask out_mask = 0;
  for (int e : out) out_mask |= bit(e);
  std::unordered_map<Code, int> best;  // smallest hidden count per code
  std::unordered_map<Code, PrepareSource> source;
  Code current = 0;
  std::vector<std::int8_t> placed(intro.size());
  Work w;
  auto emit = [&](int free) {
    Work v = w;
    int hidden = free;
    for (int j = 0; j < v.n; ++j) {
      const Mask gone = v.cls[j] & ~out_mask;
      const bool flagged = v.flags & bit(j);
      if (!(v.cls[j] & out_mask)) {
        if (flagged || (gone & gx)) ++hidden;
        v.flags &= ~bit(j);
      } else if (gone & gx) {
        v.flags |= bit(j);
      }
    }
    const Code c = v.encode_flagged(out);
    auto [it, fresh] = best.emplace(c, hidden);
    if (!fresh && hidden >= it->second) return;
    it->second = hidden;
    if (trace) source[c] = PrepareSource{current, placed};
  };
  std::function<void(std::size_t, int)> place = [&](std::size_t i, int free) {
    if (i == intro.size()) {
      emit(free);
      return;
    }
    const int e = intro[i];
    const Mask conf = u.conflict[e];
    const bool anon_ok = !(gg & bit(e));
    const int n = w.n;
    for (int j = 0; j < n; ++j) {
      if ((w.cls[j] & conf) || ((w.flags & bit(j)) && !anon_ok)) continue;
      placed[i] = static_cast<std::int8_t>(j);
      w.put(e, j);
      place(i + 1, free);
      w.take(e);
    }
    if (n + free < k) {
      placed[i] = static_cast<std::int8_t>(n);
      w.put(e, n);
      place(i + 1, free);
      w.take(e);
    }
    if (free > 0 && anon_ok) {
      placed[i] = static_cast<std::int8_t>(kNewAnon | n);
      w.put(e, n);
      w.flags |= bit(n);
      place(i + 1, free - 1);
      w.flags &= ~bit(n);
      w.take(e);
    }
  };
  for (Code c : in.codes) {
    current = c;
    w.load_flagged(c, in.slots);
    place(0, anon - std::popcount(w.flags));
  }
  ChildSide side{out, {best.begin(), best.end()}};
  std::sort(side.patterns.begin(), side.patterns.end());
  if (trace)
    for (const auto& pat : side.patterns) trace->push_back(source.at(pat.first));
  return side;
}

// Replays a prepare source. Returns the pattern over the input slots and the
// introduced edges; flags mark classes holding a pooled edge. `new_anon`
// receives the classes created around a previously free pooled edge.
inline Work replay_prepare(const std::vector<int>& in_slots, const std::vector<int>& intro, const PrepareSource& src,
                           Mask& new_anon) {
  Work w;
  w.load_flagged(src.input, in_slots);
  new_anon = 0;
  for (std::size_t i = 0; i < intro.size(); ++i) {
    const int j = src.placed[i] & ~kNewAnon;
    w.put(intro[i], j);
    if (src.placed[i] & kNewAnon) {
      w.flags |= bit(j);
      new_anon |= bit(j);
    }
  }
  return w;
}

// Joins the parent's running table (flags mark classes holding one of the
// parent's pooled child edges, `anon_x` in total) with a prepared child side.
// Every parent-side edge that conflicts with the child's pooled edges must be
// a slot of the child side. Hidden child colours may reuse the colour of a
// parent-only class without a pooled edge.
struct JoinChildSource {
  Code left = 0;
  int right = 0;  // index into ChildSide::patterns
  std::vector<std::int8_t> target;
};
using JoinChildTrace = std::unordered_map<Code, JoinChildSource>;

inline Table join_child(const Table& left, Mask gx, int anon_x, const ChildSide& right, const Universe& u,
                        const std::vector<int>& dem, const std::vector<int>& out, int k,
                        JoinChildTrace* trace = nullptr) {
  check_slots(out);
  Mask left_mask = 0, right_mask = 0;
  for (int e : left.slots) left_mask |= bit(e);
  for (int e : right.slots) right_mask |= bit(e);
  const Mask shared = left_mask & right_mask;
  std::vector<int> shared_slots;
  for (int e : left.slots)
    if (shared & bit(e)) shared_slots.push_back(e);

  // Right classes split into those meeting a shared slot (merged into the
  // left class holding `anchor`) and private ones.
  struct Part {
    Mask members;
    Mask conf;
    bool g;
    int anchor;
  };
  struct Right {
    std::vector<Part> merged, priv;
    int hidden;
    int index;
    // Per output (then demoted) edge missing from the left: the shared edge
    // whose class it joins, or ~i for private part i.
    std::int8_t source[2 * kMaxSlots];
  };
  std::vector<int> targets = out;
  targets.insert(targets.end(), dem.begin(), dem.end());
  const int nt = static_cast<int>(targets.size());
  std::unordered_map<Code, std::vector<Right>> by_key;
  {
    Work w;
    for (std::size_t ri = 0; ri < right.patterns.size(); ++ri) {
      const auto [c, hidden] = right.patterns[ri];
      w.load_flagged(c, right.slots);
      Right r{{}, {}, hidden, static_cast<int>(ri), {}};
      for (int j = 0; j < w.n; ++j) {
        const Mask m = w.cls[j];
        const Mask common = m & shared;
        const Mask extra = m & ~shared;
        const bool g = w.flags & bit(j);
        if (common) {
          if (extra || g) r.merged.push_back({extra, conflicts_of(u, extra), g, std::countr_zero(common)});
        } else {
          r.priv.push_back({m, conflicts_of(u, m), g, -1});
        }
      }
      for (int i = 0; i < nt; ++i) {
        const int e = targets[i];
        if (left_mask & bit(e)) continue;
        const int j = w.where[e];
        const Mask common = w.cls[j] & shared;
        if (common) {
          r.source[i] = static_cast<std::int8_t>(std::countr_zero(common));
        } else {
          int pi = 0;
          while (!(r.priv[pi].members & bit(e))) ++pi;
          r.source[i] = static_cast<std::int8_t>(~pi);
        }
      }
      by_key[w.encode(shared_slots)].push_back(std::move(r));
    }
  }

  CodeSet result;
  Work lw;
  for (Code c : left.codes) {
    lw.load_flagged(c, left.slots);
    auto it = by_key.find(lw.encode(shared_slots));
    if (it == by_key.end()) continue;
    const int free_x0 = anon_x - std::popcount(lw.flags);
    int nl = 0;
    int left_index[engine::kMaxClasses];
    for (int j = 0; j < lw.n; ++j)
      if (!(lw.cls[j] & shared)) left_index[nl++] = j;

    for (const Right& rr : it->second) {
      bool ok = true;
      for (const Part& p : rr.merged) {
        const int t = lw.where[p.anchor];
        const bool x = lw.flags & bit(t);
        if ((p.g && x) || (x && (p.members & gx)) || (p.conf & lw.cls[t])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const int np = static_cast<int>(rr.priv.size());
      int target[kMaxSlots];  // left_index slot, -1 fresh, -2 fresh with a pooled edge
      Mask used = 0;
      auto emit = [&](int fresh, int free_x) {
        int eligible = 0;
        for (int a = 0; a < nl; ++a)
          if (!(used & bit(a)) && !(lw.flags & bit(left_index[a]))) ++eligible;
        if (lw.n + fresh + free_x + rr.hidden - std::min(rr.hidden, eligible) > k) return;
        // Class of every output and demoted edge in the joint pattern; fresh
        // classes are numbered after the left ones.
        int cls_of[2 * kMaxSlots];
        int fresh_id[kMaxSlots];
        Mask flags = lw.flags;
        for (int i = 0, next = lw.n; i < np; ++i) {
          fresh_id[i] = target[i] >= 0 ? left_index[target[i]] : next++;
          if (target[i] == -2) flags |= bit(fresh_id[i]);
        }
        for (int i = 0; i < nt; ++i) {
          const int e = targets[i];
          if (left_mask & bit(e)) {
            cls_of[i] = lw.where[e];
          } else {
            const int src = rr.source[i];
            cls_of[i] = src >= 0 ? lw.where[src] : fresh_id[~src];
          }
        }
        const int no = static_cast<int>(out.size());
        for (int i = no; i < nt; ++i) {
          const int j = cls_of[i];
          if (flags & bit(j)) throw std::logic_error("class holds two anonymous edges");
          // The class stays visible if anything else is in it.
          Mask members = j < lw.n ? lw.cls[j] : 0;
          for (const Part& p : rr.merged)
            if (lw.where[p.anchor] == j) members |= p.members;
          for (int q = 0; q < np; ++q)
            if (fresh_id[q] == j) members |= rr.priv[q].members;
          members &= ~bit(targets[i]);
          for (int d = no; d < i; ++d)
            if (cls_of[d] == j) members &= ~bit(targets[d]);
          if (members) flags |= bit(j);
        }
        std::int8_t relabel[engine::kMaxClasses];
        std::fill(std::begin(relabel), std::end(relabel), std::int8_t{-1});
        int next = 0;
        engine::Code code = 0;
        for (int i = 0; i < no; ++i) {
          const int j = cls_of[i];
          if (relabel[j] < 0) {
            relabel[j] = static_cast<std::int8_t>(next++);
            if (flags & bit(j)) code |= engine::Code{1} << (Work::kFlagShift + relabel[j]);
          }
          code |= static_cast<engine::Code>(relabel[j]) << (4 * i);
        }
        if (result.insert(code) && trace)
          trace->emplace(code, JoinChildSource{c, rr.index, std::vector<std::int8_t>(target, target + np)});
      };
      auto assign = [&](auto& self, int i, int fresh, int free_x) -> void {
        if (i == np) {
          emit(fresh, free_x);
          return;
        }
        const Part& p = rr.priv[i];
        for (int a = 0; a < nl; ++a) {
          const int j = left_index[a];
          const bool x = lw.flags & bit(j);
          if ((used & bit(a)) || (p.conf & lw.cls[j])) continue;
          if ((p.g && x) || (x && (p.members & gx))) continue;
          used |= bit(a);
          target[i] = a;
          self(self, i + 1, fresh, free_x);
          used &= ~bit(a);
        }
        if (lw.n + fresh + 1 + free_x <= k) {
          target[i] = -1;
          self(self, i + 1, fresh + 1, free_x);
        }
        if (free_x > 0 && !p.g && !(p.members & gx)) {
          target[i] = -2;
          self(self, i + 1, fresh + 1, free_x - 1);
        }
      };
      assign(assign, 0, 0, free_x0);
    }
  }
  return Table{out, result.sorted()};
}

// Replays a join source: the joint pattern over both slot lists before the
// pooled edges are demoted. Flags mark classes holding a pooled parent edge.
// `left_only` receives the left classes without shared edges, `used` those
// of them that took a private child class.
inline Work replay_join_child(const Table& left, const ChildSide& right, const JoinChildSource& src, Mask& left_only,
                              Mask& used) {
  Mask left_mask = 0, right_mask = 0;
  for (int e : left.slots) left_mask |= bit(e);
  for (int e : right.slots) right_mask |= bit(e);
  const Mask shared = left_mask & right_mask;
  Work joint, rw;
  joint.load_flagged(src.left, left.slots);
  rw.load_flagged(right.patterns[src.right].first, right.slots);
  int left_index[engine::kMaxClasses];
  int nl = 0;
  left_only = 0;
  used = 0;
  for (int j = 0; j < joint.n; ++j) {
    if (joint.cls[j] & shared) continue;
    left_index[nl++] = j;
    left_only |= bit(j);
  }
  std::size_t q = 0;
  for (int j = 0; j < rw.n; ++j) {
    const Mask m = rw.cls[j];
    const Mask common = m & shared;
    int t;
    if (common) {
      t = joint.where[std::countr_zero(common)];
    } else {
      const int a = src.target[q++];
      if (a >= 0) {
        t = left_index[a];
        used |= bit(t);
      } else {
        t = joint.n;
        if (a == -2) joint.flags |= bit(t);
      }
    }
    for (Mask rest = m & ~shared; rest; rest &= rest - 1) joint.put(std::countr_zero(rest), t);
  }
  return joint;
}

// Gives the anonymous edge `e` an explicit slot: it takes over a flagged class
// or, if some anonymous edge is alone in its class, a class of its own.
// Source of a materialized code: the input code and the flagged class that
// `e` took over, or -1 when it was a free pooled edge.
struct MaterializeSource {
  Code input = 0;
  int taken = -1;
};
using MaterializeTrace = std::unordered_map<Code, MaterializeSource>;

inline Table materialize(const Table& in, const Universe& u, int e, int anon, const std::vector<int>& out,
                         MaterializeTrace* trace = nullptr) {
  check_slots(out);
  CodeSet result;
  Work w;
  auto add = [&](const Work& v, Code input, int taken) {
    const Code c = v.encode_flagged(out);
    if (result.insert(c) && trace) trace->emplace(c, MaterializeSource{input, taken});
  };
  for (Code c : in.codes) {
    w.load_flagged(c, in.slots);
    const Mask flagged = w.flags;
    for (int j = 0; j < w.n; ++j) {
      if (!(flagged & bit(j))) continue;
      if (w.cls[j] & u.conflict[e]) throw std::logic_error("anonymous edges are not interchangeable");
      Work v = w;
      v.flags &= ~bit(j);
      v.put(e, j);
      add(v, c, j);
    }
    if (anon - std::popcount(flagged) > 0) {
      Work v = w;
      v.put(e, v.n);
      add(v, c, -1);
    }
  }
  return Table{out, result.sorted()};
}

}  // namespace general_detail

struct GeneralStats {
  std::size_t max_states = 0;
  std::size_t steps = 0;
  std::size_t memo_hits = 0;
  std::size_t distinct_tables = 0;
};

// Decides k-colourability for Halin graphs of any degree by absorbing the
// children of each vertex one at a time, left to right.
class GeneralSolver {
 public:
  // Keeps a reference to g, so temporaries are rejected.
  explicit GeneralSolver(HalinGraph&&) = delete;
  explicit GeneralSolver(const HalinGraph& g) : g_(g), view_(make_rooted_view(g)) {
    roles_.resize(g.vertex_count());
    steps_.resize(g.vertex_count());
    anon_.assign(g.vertex_count(), 0);
    for (int v : view_.postorder) {
      roles_[v] = general_detail::roles_of(view_, v);
      for (int c : view_.children[v]) {
        const int e = view_.parent_edge[c];
        if (e != roles_[v][general_detail::TY] && e != roles_[v][general_detail::TZ]) ++anon_[v];
      }
    }
  }

  const RootedView& view() const { return view_; }

  bool decide(int k) {
    decided_k_ = -1;
    traces_.clear();
    node_table_.assign(g_.vertex_count(), -1);
    if (k < 3) return false;
    const engine::Code leaf_code = engine::Code{1} << 4 | engine::Code{2} << 8;
    const int leaf_table = intern({leaf_code});
    for (int x : view_.postorder) {
      node_table_[x] = view_.is_leaf(x) ? leaf_table : absorb_children(x, k);
      if (tables_[node_table_[x]].empty()) return false;
    }
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
    const auto slots = general_detail::distinct(roles_[top]);
    int n = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      colour[slots[i]] = pattern_code::label_at(code, static_cast<int>(i));
      n = std::max(n, colour[slots[i]] + 1);
    }
    std::vector<int> pool;
    const int free = anon_[top] - std::popcount(static_cast<engine::Mask>(code >> engine::Work::kFlagShift));
    for (int c = n; c < n + free; ++c) pool.push_back(c);
    if (n + free > k) throw std::logic_error("witness: top pattern exceeds palette");
    std::vector<std::tuple<int, engine::Code, std::vector<int>>> todo;
    todo.emplace_back(top, code, std::move(pool));
    while (!todo.empty()) {
      auto [x, c, free_colours] = std::move(todo.back());
      todo.pop_back();
      if (!view_.is_leaf(x)) unfold(x, c, std::move(free_colours), k, colour, todo);
    }
    traces_.clear();
    if (!repair_coloring(build_conflict_graph(g_), colour, k))
      throw Error(ErrorKind::NoWitness, "read-back left clashes that local recolouring could not fix");
    return EdgeColoring{k, std::move(colour)};
  }

  // Patterns of the boundary of the subtree at `vertex_id` after decide().
  std::vector<GeneralPattern> patterns(int vertex_id) const {
    const int x = g_.tree().index_of(vertex_id);
    std::vector<GeneralPattern> out;
    if (x == view_.root || node_table_.empty() || node_table_[x] < 0) return out;
    const auto slots = general_detail::distinct(roles_[x]);
    for (engine::Code c : tables_[node_table_[x]]) {
      GeneralPattern p;
      for (std::size_t i = 0; i < slots.size(); ++i) p.labels.push_back(pattern_code::label_at(c, static_cast<int>(i)));
      p.anon_flags = static_cast<std::uint32_t>(c >> engine::Work::kFlagShift);
      p.anon_free = anon_[x] - std::popcount(p.anon_flags);
      out.push_back(std::move(p));
    }
    return out;
  }

  // Edge indices named by the patterns of `vertex_id`, in slot order.
  std::vector<int> boundary(int vertex_id) const {
    return general_detail::distinct(roles_[g_.tree().index_of(vertex_id)]);
  }

  const GeneralStats& stats() const { return stats_; }

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

  bool near(int v, int e) const {
    const auto [a, b] = g_.graph().edge(e);
    for (int w : {a, b})
      if (w == v || w == view_.parent[v] || view_.parent[w] == v) return true;
    return false;
  }

  bool child_edge_of(int x, int e) const {
    const auto [a, b] = g_.graph().edge(e);
    return (a == x && view_.parent[b] == x) || (b == x && view_.parent[a] == x);
  }

  // A child edge of x that conflicts with f although f has no endpoint in
  // N[x]; such an edge cannot stand in for the other, pooled child edges.
  bool special(int x, int e, int f) const {
    return e != f && !near(x, f) && edges_conflict(g_.graph(), e, f);
  }

  // One child absorption at x, in global edge ids.
  struct StepArgs {
    int c = 0;
    std::vector<int> slots, pre, keep;
    int table = -1;  // running table before the step
  };

  int absorb_children(int x, int k) {
    using namespace general_detail;
    const auto& ch = view_.children[x];
    const int m = static_cast<int>(ch.size());
    const Roles& bx = roles_[x];
    std::vector<int> e(m);
    for (int i = 0; i < m; ++i) e[i] = view_.parent_edge[ch[i]];
    auto is_x = [&](int f) { return child_edge_of(x, f); };
    auto special_to_any = [&](int l, const std::vector<int>& fs) {
      return std::any_of(fs.begin(), fs.end(), [&](int f) { return !is_x(f) && special(x, e[l], f); });
    };

    // Only the parent edge is explicit at first; every child edge is pooled.
    std::vector<int> slots{bx[P]};
    int table = intern(m + 1 <= k ? std::vector<engine::Code>{0} : std::vector<engine::Code>{});
    steps_[x].clear();
    for (int i = 0; i < m && !tables_[table].empty(); ++i) {
      const Roles& bc = roles_[ch[i]];
      const auto cs = distinct(bc);
      std::vector<int> seen = slots;
      seen.insert(seen.end(), cs.begin(), cs.end());
      std::vector<int> pre;
      auto want = [&](int l) {
        if (l < 0 || l >= m) return;
        if (std::find(slots.begin(), slots.end(), e[l]) != slots.end()) return;
        if (std::find(pre.begin(), pre.end(), e[l]) != pre.end()) return;
        if (l == i || special_to_any(l, seen)) pre.push_back(e[l]);
      };
      for (int l : {i, 0, i - 1, i + 1, i + 2, m - 1}) want(l);

      std::vector<int> keep;
      if (i + 1 < m) {
        for (int r : {bx[P], bx[CL], bx[TY], bx[NY], bc[CR], bc[TZ], bc[PZ]}) push_unique(keep, r);
        std::vector<int> held = slots;
        held.insert(held.end(), pre.begin(), pre.end());
        for (int l = 0; l < m; ++l) {
          const bool explicit_now = std::find(held.begin(), held.end(), e[l]) != held.end();
          if (explicit_now && special_to_any(l, keep)) push_unique(keep, e[l]);
        }
      } else {
        keep = distinct(bx);
      }
      steps_[x].push_back(StepArgs{ch[i], slots, pre, keep, table});
      table = step(x, steps_[x].back(), k);
      slots = keep;
    }
    return table;
  }

  // The step in local ids, with the staged edge lists.
  struct StepPlan {
    engine::Universe u;
    std::string key;
    std::vector<int> s0, pre, cs, keep;
    std::vector<int> s;        // s0 then the materialized edges
    std::vector<int> intro_t;  // parent-side edges the child side takes in
    std::vector<int> t_out;    // child side after early forgetting
    std::vector<int> dem;      // child edges of x returning to the pool
    engine::Mask gx = 0, gg = 0, xe = 0;
    int m = 0, anon_c = 0, r_table = -1, t_table = -1;

    int pool(engine::Mask explicit_edges) const { return m - std::popcount(explicit_edges & xe); }
  };

  StepPlan plan(int x, const StepArgs& a, int k) const {
    using namespace general_detail;
    StepPlan p;
    p.m = static_cast<int>(view_.children[x].size());
    p.anon_c = anon_[a.c];
    p.r_table = a.table;
    p.t_table = node_table_[a.c];
    auto local = [&](const std::vector<int>& gl) {
      std::vector<int> out;
      for (int ge : gl) out.push_back(p.u.add(g_.graph(), ge));
      p.key.push_back(static_cast<char>(out.size()));
      for (int l : out) p.key.push_back(static_cast<char>(l));
      return out;
    };
    p.s0 = local(a.slots);
    p.pre = local(a.pre);
    p.cs = local(distinct(roles_[a.c]));
    p.keep = local(a.keep);

    const int nu = static_cast<int>(p.u.edges.size());
    for (int l = 0; l < nu; ++l) {
      if (near(x, p.u.edges[l])) p.gx |= bit(l);
      if (near(a.c, p.u.edges[l])) p.gg |= bit(l);
      if (child_edge_of(x, p.u.edges[l])) p.xe |= bit(l);
    }
    for (Mask msk : p.u.conflict) p.key.append(reinterpret_cast<const char*>(&msk), sizeof msk);
    for (Mask v : {p.gx, p.gg, p.xe}) p.key.append(reinterpret_cast<const char*>(&v), sizeof v);
    for (int v : {p.m, p.anon_c, p.r_table, p.t_table, k}) p.key.append(reinterpret_cast<const char*>(&v), sizeof v);

    auto mask_of = [](const std::vector<int>& v) {
      Mask out = 0;
      for (int l : v) out |= bit(l);
      return out;
    };
    auto list_of = [&](Mask msk, const std::vector<int>& prefer) {
      std::vector<int> out;
      for (int l : prefer)
        if (msk & bit(l)) out.push_back(l);
      for (int l = 0; l < nu; ++l)
        if ((msk & bit(l)) && !(mask_of(prefer) & bit(l))) out.push_back(l);
      return out;
    };
    p.s = p.s0;
    p.s.insert(p.s.end(), p.pre.begin(), p.pre.end());
    const Mask ms = mask_of(p.s), mc = mask_of(p.cs), mk = mask_of(p.keep);
    // The child side takes in every parent-side edge that sees its pooled
    // edges, plus the partners of its own edges that can be forgotten before
    // the join. If that is too wide, nothing is forgotten early.
    Mask drop_t = mc & ~mk & ~ms;
    Mask intro_t = ms & ~mc & (p.gg | conflicts_of(p.u, drop_t));
    if (std::popcount((mc & ~drop_t) | intro_t) > static_cast<int>(kMaxSlots)) {
      drop_t = 0;
      intro_t = ms & ~mc & p.gg;
    }
    p.intro_t = list_of(intro_t, p.s);
    p.t_out = list_of((mc & ~drop_t) | intro_t, p.cs);
    // Child edges leaving the explicit set rejoin the pool.
    p.dem = list_of((ms | mc) & p.xe & ~mk, {});
    return p;
  }

  struct StepTrace {
    std::vector<general_detail::MaterializeTrace> materialized;
    engine::Table joined_left;  // running table after materialization (slots only)
    general_detail::ChildSide child;
    std::vector<general_detail::PrepareSource> prepared;
    general_detail::JoinChildTrace joined;
  };

  engine::Table compute(const StepPlan& p, int k, StepTrace* trace) const {
    using namespace general_detail;
    auto mask_of = [](const std::vector<int>& v) {
      Mask out = 0;
      for (int l : v) out |= bit(l);
      return out;
    };
    Table r0{p.s0, tables_[p.r_table]};
    std::vector<int> s = p.s0;
    if (trace) trace->materialized.resize(p.pre.size());
    for (std::size_t i = 0; i < p.pre.size(); ++i) {
      auto slots = s;
      slots.push_back(p.pre[i]);
      r0 = materialize(r0, p.u, p.pre[i], p.pool(mask_of(s)), slots, trace ? &trace->materialized[i] : nullptr);
      s = std::move(slots);
    }
    ChildSide t = prepare_child(Table{p.cs, tables_[p.t_table]}, p.u, p.gg, p.gx, p.anon_c, p.intro_t, p.t_out, k,
                                trace ? &trace->prepared : nullptr);
    Table out = join_child(r0, p.gx, p.pool(mask_of(p.s)), t, p.u, p.dem, p.keep, k,
                           trace ? &trace->joined : nullptr);
    if (trace) {
      trace->joined_left = Table{p.s, {}};
      trace->child = std::move(t);
    }
    return out;
  }

  int step(int x, const StepArgs& a, int k) {
    StepPlan p = plan(x, a, k);
    ++stats_.steps;
    if (auto it = memo_.find(p.key); it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    const int id = intern(compute(p, k, nullptr).codes);
    memo_.emplace(std::move(p.key), id);
    return id;
  }

  // Colours the subtree at x. On entry the boundary edges of x carry colours
  // realising `code`, and `pool` lists the colours of the pooled child edges
  // of x that sit in no boundary class. Pushes the children to `todo`.
  // A pooled child edge may stand in for another one between steps, so the
  // read-back can leave a few clashes among child edges of x; witness()
  // repairs them.
  void unfold(int x, engine::Code code, std::vector<int> pool, int k, std::vector<int>& colour,
              std::vector<std::tuple<int, engine::Code, std::vector<int>>>& todo) {
    using namespace general_detail;
    const auto& steps = steps_[x];
    for (int i = static_cast<int>(steps.size()) - 1; i >= 0; --i) {
      const StepPlan p = plan(x, steps[i], k);
      auto it = traces_.find(p.key);
      if (it == traces_.end()) {
        StepTrace t;
        compute(p, k, &t);
        it = traces_.emplace(p.key, std::move(t)).first;
      }
      const StepTrace& t = it->second;
      const auto js = t.joined.find(code);
      if (js == t.joined.end()) throw std::logic_error("witness: pattern missing from step trace");
      Mask left_only = 0, used = 0;
      const Work joint = replay_join_child(t.joined_left, t.child, js->second, left_only, used);
      Mask mk = 0, dem = 0;
      for (int l : p.keep) mk |= bit(l);
      for (int l : p.dem) dem |= bit(l);
      auto colour_of = [&](int l) -> int& { return colour[p.u.edges[l]]; };
      auto class_colour = [&](int j) {
        for (Mask rest = joint.cls[j]; rest; rest &= rest - 1)
          if (colour_of(std::countr_zero(rest)) >= 0) return colour_of(std::countr_zero(rest));
        return -1;
      };

      // Classes leaving the boundary while holding a pooled edge take colours
      // of the free pool; a member coloured earlier fixes which one.
      std::vector<int> rest_pool = pool;
      auto take = [&](int c) {
        auto pos = std::find(rest_pool.begin(), rest_pool.end(), c);
        if (pos != rest_pool.end()) rest_pool.erase(pos);
      };
      std::vector<int> vanished;
      for (int j = 0; j < joint.n; ++j) {
        if (!joint.cls[j] || (joint.cls[j] & mk)) continue;
        if (!(joint.flags & bit(j)) && !(joint.cls[j] & dem)) continue;
        const int c = class_colour(j);
        if (c >= 0) {
          take(c);
        } else {
          vanished.push_back(j);
        }
      }
      // Pooled colours already fixed on a child edge of x stay with that edge.
      std::vector<int> claimed;
      for (int cx : view_.children[x])
        if (const int v = colour[view_.parent_edge[cx]]; v >= 0) claimed.push_back(v);
      for (int j : vanished) {
        int c = -1;
        for (int cand : rest_pool)
          if (std::find(claimed.begin(), claimed.end(), cand) == claimed.end()) {
            c = cand;
            break;
          }
        if (c < 0 && !rest_pool.empty()) c = rest_pool.front();
        if (c < 0) continue;
        take(c);
        colour_of(std::countr_zero(joint.cls[j])) = c;
      }
      engine::colour_classes(joint, p.u, colour, k, rest_pool, false);

      // Hidden child colours: first the eligible parent-only classes, then
      // colours seen nowhere in the joint pattern or the pool.
      const int hidden = t.child.patterns[js->second.right].second;
      std::vector<int> hidden_colours;
      for (int j = 0; j < joint.n && static_cast<int>(hidden_colours.size()) < hidden; ++j)
        if ((left_only & bit(j)) && !(used & bit(j)) && !(joint.flags & bit(j)) && class_colour(j) >= 0)
          hidden_colours.push_back(class_colour(j));
      {
        std::vector<char> busy(static_cast<std::size_t>(k), 0);
        for (int j = 0; j < joint.n; ++j)
          if (joint.cls[j] && class_colour(j) >= 0) busy[class_colour(j)] = 1;
        for (int c : rest_pool) busy[c] = 1;
        int next = 0;
        while (static_cast<int>(hidden_colours.size()) < hidden) {
          while (next < k && busy[next]) ++next;
          if (next == k) break;
          hidden_colours.push_back(next);
          busy[next] = 1;
        }
      }

      // Child side: classes that vanished early or hold a free pooled edge of
      // the child take the hidden colours.
      const int c = steps[i].c;
      Mask new_anon = 0;
      const auto& ps = t.prepared[js->second.right];
      const Work cw = replay_prepare(p.cs, p.intro_t, ps, new_anon);
      Mask mt = 0;
      for (int l : p.t_out) mt |= bit(l);
      std::size_t h = 0;
      for (int j = 0; j < cw.n; ++j) {
        const Mask gone = cw.cls[j] & ~mt;
        if (!cw.cls[j] || (cw.cls[j] & mt)) continue;
        if (((cw.flags & bit(j)) || (gone & p.gx)) && h < hidden_colours.size())
          colour[p.u.edges[std::countr_zero(cw.cls[j])]] = hidden_colours[h++];
      }
      std::vector<int> child_pool(hidden_colours.begin() + static_cast<std::ptrdiff_t>(h), hidden_colours.end());
      engine::colour_classes(cw, p.u, colour, k, child_pool, false);
      for (int j = 0; j < cw.n; ++j)
        if (new_anon & bit(j)) child_pool.push_back(colour[p.u.edges[std::countr_zero(cw.cls[j])]]);
      if (!view_.is_leaf(c)) todo.emplace_back(c, ps.input, std::move(child_pool));

      // Left side: undo the materializations.
      // New classes built around a free pooled edge return that edge's colour.
      pool = rest_pool;
      Work lw;
      lw.load_flagged(js->second.left, t.joined_left.slots);
      for (int j = lw.n; j < joint.n; ++j)
        if (joint.flags & bit(j)) pool.push_back(class_colour(j));
      code = js->second.left;
      for (std::size_t q = 0; q < p.pre.size(); ++q) {
        const std::size_t r = p.pre.size() - 1 - q;
        const auto& src = t.materialized[r].at(code);
        if (src.taken < 0) pool.push_back(colour_of(p.pre[r]));
        code = src.input;
      }
    }
    if (code != 0) throw std::logic_error("witness: start state mismatch");
  }

  const HalinGraph& g_;
  RootedView view_;
  std::vector<general_detail::Roles> roles_;
  std::vector<int> anon_;  // anonymous child edges of each vertex
  std::vector<int> node_table_;
  std::vector<std::vector<engine::Code>> tables_;
  std::unordered_map<std::string, int> intern_;
  std::unordered_map<std::string, int> memo_;
  std::vector<std::vector<StepArgs>> steps_;
  std::unordered_map<std::string, StepTrace> traces_;
  int decided_k_ = -1;
  GeneralStats stats_;
};

}  // namespace halin
