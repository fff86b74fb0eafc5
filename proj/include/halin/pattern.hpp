#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "halin/errors.hpp"

namespace halin {

// Colour-equality pattern of an ordered edge list in restricted-growth form:
// labels[i] is the class of the i-th edge and the first occurrences of the
// classes appear in increasing order 0, 1, 2, ...
struct BoundaryPattern {
  std::vector<int> labels;
  int class_count = 0;

  friend bool operator==(const BoundaryPattern&, const BoundaryPattern&) = default;
};

// Relabels any colouring of the listed edges into canonical form, so that
// colourings differing by a permutation of colours give the same pattern.
inline BoundaryPattern canonical_pattern(const std::vector<int>& colors) {
  BoundaryPattern p;
  std::vector<std::pair<int, int>> seen;  // (colour, label)
  p.labels.reserve(colors.size());
  for (int c : colors) {
    int label = -1;
    for (auto [col, lab] : seen)
      if (col == c) label = lab;
    if (label < 0) {
      label = static_cast<int>(seen.size());
      seen.emplace_back(c, label);
    }
    p.labels.push_back(label);
  }
  p.class_count = static_cast<int>(seen.size());
  return p;
}

namespace pattern_code {

// Packed restricted-growth string: four bits per position, position i in bits
// [4i, 4i+4). Holds up to 16 positions, enough for every boundary used here.
using Code = std::uint64_t;

inline constexpr int kMaxPositions = 16;

inline int label_at(Code c, int i) { return static_cast<int>((c >> (4 * i)) & 0xF); }

inline Code encode(const BoundaryPattern& p) {
  if (p.labels.size() > static_cast<std::size_t>(kMaxPositions))
    throw Error(ErrorKind::InvalidArgument, "pattern longer than 16 positions");
  Code c = 0;
  for (std::size_t i = 0; i < p.labels.size(); ++i) c |= static_cast<Code>(p.labels[i]) << (4 * i);
  return c;
}

inline BoundaryPattern decode(Code c, int length) {
  BoundaryPattern p;
  for (int i = 0; i < length; ++i) {
    p.labels.push_back(label_at(c, i));
    if (p.labels.back() + 1 > p.class_count) p.class_count = p.labels.back() + 1;
  }
  return p;
}

}  // namespace pattern_code

}  // namespace halin
