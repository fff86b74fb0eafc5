#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "halin/conflict.hpp"
#include "halin/errors.hpp"
#include "halin/graph.hpp"
#include "halin/pattern.hpp"

// Building blocks shared by both boundary dynamic programs: a small local
// universe of edges with conflict bitmasks, tables of packed canonical
// patterns, and the introduce / forget / join steps over them.
namespace halin::engine {

using pattern_code::Code;
using Mask = std::uint32_t;

inline constexpr int kMaxLocal = 32;
inline constexpr int kMaxClasses = 16;

inline Mask bit(int i) { return Mask{1} << i; }

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Open-addressing set of codes. The all-ones word never occurs as a canonical
// code, so it marks empty slots.
class CodeSet {
 public:
  static constexpr Code kEmpty = ~Code{0};

  CodeSet() { slots_.assign(16, kEmpty); }

  bool insert(Code c) {
    if ((size_ + 1) * 2 > slots_.size()) grow();
    std::size_t i = mix(c) & (slots_.size() - 1);
    while (slots_[i] != kEmpty) {
      if (slots_[i] == c) return false;
      i = (i + 1) & (slots_.size() - 1);
    }
    slots_[i] = c;
    ++size_;
    return true;
  }

  bool contains(Code c) const {
    std::size_t i = mix(c) & (slots_.size() - 1);
    while (slots_[i] != kEmpty) {
      if (slots_[i] == c) return true;
      i = (i + 1) & (slots_.size() - 1);
    }
    return false;
  }

  std::size_t size() const { return size_; }

  std::vector<Code> sorted() const {
    std::vector<Code> out;
    out.reserve(size_);
    for (Code c : slots_)
      if (c != kEmpty) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void grow() {
    std::vector<Code> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, kEmpty);
    size_ = 0;
    for (Code c : old)
      if (c != kEmpty) insert(c);
  }

  std::vector<Code> slots_;
  std::size_t size_ = 0;
};

// Edges touched by one merge step, addressed by local ids 0..31.
struct Universe {
  std::vector<int> edges;
  std::vector<Mask> conflict;

  int add(const SimpleGraph& g, int e) {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i] == e) return static_cast<int>(i);
    if (edges.size() >= static_cast<std::size_t>(kMaxLocal))
      throw Error(ErrorKind::InvalidArgument, "merge universe exceeds 32 edges");
    const int id = static_cast<int>(edges.size());
    edges.push_back(e);
    conflict.push_back(0);
    for (int j = 0; j < id; ++j) {
      if (edges_conflict(g, edges[j], e)) {
        conflict[j] |= bit(id);
        conflict[id] |= bit(j);
      }
    }
    return id;
  }

  int find(int e) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i] == e) return static_cast<int>(i);
    return -1;
  }
};

// Canonical patterns over an ordered list of local edge ids.
struct Table {
  std::vector<int> slots;
  std::vector<Code> codes;  // sorted, unique

  bool contains(Code c) const { return std::binary_search(codes.begin(), codes.end(), c); }
};

// A pattern expanded to class masks over the universe.
struct Work {
  Mask cls[kMaxClasses];
  std::int8_t where[kMaxLocal];
  int n = 0;
  Mask flags = 0;  // bit j: class j also holds one anonymous edge

  void clear() {
    n = 0;
    flags = 0;
    std::fill(std::begin(where), std::end(where), std::int8_t{-1});
  }

  void load(Code c, const std::vector<int>& slots) {
    clear();
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const int label = pattern_code::label_at(c, static_cast<int>(i));
      if (label >= n) {
        for (int j = n; j <= label; ++j) cls[j] = 0;
        n = label + 1;
      }
      cls[label] |= bit(slots[i]);
      where[slots[i]] = static_cast<std::int8_t>(label);
    }
  }

  void put(int e, int j) {
    if (j == n) cls[n++] = 0;
    cls[j] |= bit(e);
    where[e] = static_cast<std::int8_t>(j);
  }

  void take(int e) {
    const int j = where[e];
    cls[j] &= ~bit(e);
    where[e] = -1;
    if (j == n - 1 && cls[j] == 0) --n;
  }

  // Canonical code of the restriction to `slots`; every slot must be placed.
  Code encode(const std::vector<int>& slots) const {
    std::int8_t relabel[kMaxClasses];
    std::fill(std::begin(relabel), std::end(relabel), std::int8_t{-1});
    int next = 0;
    Code c = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const int j = where[slots[i]];
      if (relabel[j] < 0) relabel[j] = static_cast<std::int8_t>(next++);
      c |= static_cast<Code>(relabel[j]) << (4 * i);
    }
    return c;
  }

  // As encode, plus the flags of the surviving classes in bits 48..63
  // (indexed by canonical label). Limited to 12 slots.
  Code encode_flagged(const std::vector<int>& slots) const {
    std::int8_t relabel[kMaxClasses];
    std::fill(std::begin(relabel), std::end(relabel), std::int8_t{-1});
    int next = 0;
    Code c = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const int j = where[slots[i]];
      if (relabel[j] < 0) {
        relabel[j] = static_cast<std::int8_t>(next++);
        if (flags & bit(j)) c |= Code{1} << (kFlagShift + relabel[j]);
      }
      c |= static_cast<Code>(relabel[j]) << (4 * i);
    }
    return c;
  }

  void load_flagged(Code c, const std::vector<int>& slots) {
    load(c & kLabelMask, slots);
    flags = static_cast<Mask>(c >> kFlagShift);
  }

  static constexpr int kFlagShift = 48;
  static constexpr Code kLabelMask = (Code{1} << kFlagShift) - 1;
};

inline Mask conflicts_of(const Universe& u, Mask members) {
  Mask out = 0;
  while (members) {
    out |= u.conflict[std::countr_zero(members)];
    members &= members - 1;
  }
  return out;
}

// Places each edge of `intro` into an existing class it does not conflict with
// or into a fresh class (keeping at most k classes), then projects to `out`.
// Edges of the input absent from `out` are forgotten; callers guarantee all of
// their conflicts inside the universe are present by then.
// How an output code of transform was first produced: the input code and the
// class each introduced edge went to (== class count at that point: new).
struct TransformSource {
  Code input = 0;
  std::vector<std::int8_t> placed;
};
using TransformTrace = std::unordered_map<Code, TransformSource>;

inline Table transform(const Table& in, const Universe& u, const std::vector<int>& intro,
                       const std::vector<int>& out, int k, TransformTrace* trace = nullptr) {
  CodeSet result;
  Work w;
  Code current = 0;
  std::vector<std::int8_t> placed(intro.size());
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (i == intro.size()) {
      const Code c = w.encode(out);
      if (result.insert(c) && trace) trace->emplace(c, TransformSource{current, placed});
      return;
    }
    const int e = intro[i];
    const Mask conf = u.conflict[e];
    const int n = w.n;
    for (int j = 0; j < n; ++j) {
      if (w.cls[j] & conf) continue;
      placed[i] = static_cast<std::int8_t>(j);
      w.put(e, j);
      place(i + 1);
      w.take(e);
    }
    if (n < k) {
      placed[i] = static_cast<std::int8_t>(n);
      w.put(e, n);
      place(i + 1);
      w.take(e);
    }
  };
  for (Code c : in.codes) {
    current = c;
    w.load(c, in.slots);
    place(0);
  }
  return Table{out, result.sorted()};
}

// Replays a transform source: the full pattern over input slots and intro.
inline Work replay(const Table& in, const std::vector<int>& intro, const TransformSource& src) {
  Work w;
  w.load(src.input, in.slots);
  for (std::size_t i = 0; i < intro.size(); ++i) w.put(intro[i], src.placed[i]);
  return w;
}

// Joint patterns over the union of both slot lists that restrict to a member
// of each table, projected to `out`. Shared edges are identified; classes
// private to one side may merge with private classes of the other.
// How an output code of join was first produced. target[i] is the left class
// receiving the i-th right-private class, or -1 for a new class.
struct JoinSource {
  Code left = 0;
  Code right = 0;
  std::vector<std::int8_t> target;
};
using JoinTrace = std::unordered_map<Code, JoinSource>;

inline Table join(const Table& left, const Table& right, const Universe& u, const std::vector<int>& out, int k,
                  JoinTrace* trace = nullptr) {
  Mask left_mask = 0, right_mask = 0;
  for (int e : left.slots) left_mask |= bit(e);
  for (int e : right.slots) right_mask |= bit(e);
  const Mask shared = left_mask & right_mask;
  std::vector<int> shared_slots;
  for (int e : left.slots)
    if (shared & bit(e)) shared_slots.push_back(e);

  struct Side {
    Code code;
    Work work;
  };
  std::unordered_map<Code, std::vector<Side>> by_key;
  for (Code c : right.codes) {
    Side s{c, {}};
    s.work.load(c, right.slots);
    by_key[s.work.encode(shared_slots)].push_back(s);
  }

  CodeSet result;
  Work joint;
  Mask right_private[kMaxClasses];
  Mask left_free[kMaxClasses];
  for (Code c : left.codes) {
    Work lw;
    lw.load(c, left.slots);
    auto it = by_key.find(lw.encode(shared_slots));
    if (it == by_key.end()) continue;
    for (const Side& r : it->second) {
      joint = lw;
      bool ok = true;
      int np = 0;
      // Shared classes line up because the restrictions to the shared edges agree.
      Mask touched = 0;
      for (int j = 0; j < r.work.n && ok; ++j) {
        const Mask m = r.work.cls[j];
        const Mask common = m & shared;
        const Mask extra = m & ~shared;
        if (common) {
          const int target = joint.where[std::countr_zero(common)];
          touched |= bit(target);
          if (extra) {
            if ((conflicts_of(u, extra) & joint.cls[target]) || (conflicts_of(u, extra) & extra)) ok = false;
            Mask rest = extra;
            while (rest) {
              joint.put(std::countr_zero(rest), target);
              rest &= rest - 1;
            }
          }
        } else {
          right_private[np++] = m;
        }
      }
      if (!ok) continue;
      int nl = 0;
      int left_index[kMaxClasses];
      for (int j = 0; j < joint.n; ++j) {
        if (!(touched & bit(j)) && !(joint.cls[j] & shared)) {
          left_index[nl] = j;
          left_free[nl++] = joint.cls[j];
        }
      }
      // Enumerate merges of right-private classes into left-private ones.
      Mask used = 0;
      int target[kMaxClasses];
      std::function<void(int, int)> assign = [&](int i, int classes) {
        if (i == np) {
          if (classes > k) return;
          const Code oc = joint.encode(out);
          if (result.insert(oc) && trace) {
            JoinSource src{c, r.code, {}};
            for (int q = 0; q < np; ++q) src.target.push_back(static_cast<std::int8_t>(target[q]));
            trace->emplace(oc, std::move(src));
          }
          return;
        }
        const Mask m = right_private[i];
        const Mask conf = conflicts_of(u, m);
        for (int a = 0; a < nl; ++a) {
          if ((used & bit(a)) || (conf & left_free[a])) continue;
          used |= bit(a);
          target[i] = left_index[a];
          Mask rest = m;
          while (rest) {
            joint.put(std::countr_zero(rest), left_index[a]);
            rest &= rest - 1;
          }
          assign(i + 1, classes);
          rest = m;
          while (rest) {
            joint.take(std::countr_zero(rest));
            rest &= rest - 1;
          }
          used &= ~bit(a);
        }
        if (classes + 1 <= k) {
          const int fresh = joint.n;
          target[i] = -1;
          Mask rest = m;
          while (rest) {
            joint.put(std::countr_zero(rest), fresh);
            rest &= rest - 1;
          }
          assign(i + 1, classes + 1);
          rest = m;
          while (rest) {
            joint.take(std::countr_zero(rest));
            rest &= rest - 1;
          }
        }
      };
      assign(0, joint.n);
    }
  }
  return Table{out, result.sorted()};
}

// Replays a join source: the joint pattern over both slot lists.
inline Work replay(const Table& left, const Table& right, const JoinSource& src) {
  Mask left_mask = 0;
  for (int e : left.slots) left_mask |= bit(e);
  Work joint, rw;
  joint.load(src.left, left.slots);
  rw.load(src.right, right.slots);
  std::size_t q = 0;
  for (int j = 0; j < rw.n; ++j) {
    const Mask m = rw.cls[j];
    const Mask common = m & left_mask;
    int target;
    if (common) {
      target = joint.where[std::countr_zero(common)];
    } else {
      target = src.target[q++];
      if (target < 0) target = joint.n;
    }
    for (Mask rest = m & ~left_mask; rest; rest &= rest - 1) joint.put(std::countr_zero(rest), target);
  }
  return joint;
}

// Gives every class of `w` a colour. Classes with an already coloured member
// (`colour` is indexed by global edge) keep that colour; the others get the
// smallest colours below k not used by any class of `w` and not in `avoid`.
// Then colours all members.
// With `strict` off, members that already disagree with their class keep
// their colour, and classes beyond the palette stay uncoloured; both are left
// for a later repair.
inline void colour_classes(const Work& w, const Universe& u, std::vector<int>& colour, int k,
                           const std::vector<int>& avoid = {}, bool strict = true) {
  std::vector<int> cc(static_cast<std::size_t>(w.n), -1);
  for (int j = 0; j < w.n; ++j) {
    for (Mask rest = w.cls[j]; rest; rest &= rest - 1) {
      const int c = colour[u.edges[std::countr_zero(rest)]];
      if (c < 0 || cc[j] == c) continue;
      if (cc[j] >= 0) {
        if (strict) throw std::logic_error("witness: class with two colours");
        continue;
      }
      cc[j] = c;
    }
  }
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  auto mark = [&](int c) {
    if (c < 0 || c >= k) throw std::logic_error("witness: colour outside palette");
    if (used[c]) return false;
    used[c] = 1;
    return true;
  };
  for (int j = 0; j < w.n; ++j)
    if (w.cls[j] && cc[j] >= 0 && !mark(cc[j]) && strict) throw std::logic_error("witness: two classes share a colour");
  for (int c : avoid)
    if (c >= 0 && c < k) used[c] = 1;
  int next = 0;
  for (int j = 0; j < w.n; ++j) {
    if (!w.cls[j] || cc[j] >= 0) continue;
    while (next < k && used[next]) ++next;
    if (next == k) {
      if (strict) throw std::logic_error("witness: palette exhausted");
      break;
    }
    cc[j] = next;
    used[next] = 1;
  }
  for (int j = 0; j < w.n; ++j)
    for (Mask rest = w.cls[j]; rest; rest &= rest - 1)
      if (int& c = colour[u.edges[std::countr_zero(rest)]]; c < 0) c = cc[j];
}

}  // namespace halin::engine
