#include <gtest/gtest.h>

#include "halin/closed_form.hpp"
#include "halin/conflict.hpp"
#include "halin/generators.hpp"
#include "halin/oracle.hpp"

using namespace halin;

namespace {

// Plain backtracking over edges in index order. A new colour is only opened
// as the next unused one; otherwise no pruning beyond the conflict test.
bool colourable(const SimpleGraph& g, int k, std::vector<int>& colour, int e = 0, int used = 0) {
  if (e == g.edge_count()) return true;
  for (int c = 0; c < std::min(k, used + 1); ++c) {
    bool ok = true;
    for (int f = 0; f < e && ok; ++f)
      if (colour[f] == c && edges_conflict(g, e, f)) ok = false;
    if (!ok) continue;
    colour[e] = c;
    if (colourable(g, k, colour, e + 1, std::max(used, c + 1))) return true;
  }
  colour[e] = -1;
  return false;
}

int brute_force_sei(const SimpleGraph& g) {
  std::vector<int> colour(g.edge_count(), -1);
  int k = 1;
  while (!colourable(g, k, colour)) ++k;
  return k;
}

void expect_valid_witness(const SimpleGraph& g, const OracleResult& r) {
  ASSERT_EQ(static_cast<int>(r.witness.colors.size()), g.edge_count());
  EXPECT_TRUE(verify_strong_coloring(g, r.witness).ok);
  EXPECT_EQ(r.witness.distinct_colors(), r.value);
}

}  // namespace

TEST(Oracle, PublishedSmallValues) {
  EXPECT_EQ(sei_exact(gen_necklace(2)).value, 9);
  EXPECT_EQ(sei_exact(gen_necklace(4)).value, 8);
  EXPECT_EQ(sei_exact(gen_wheel(6)).value, 9);
  EXPECT_EQ(sei_exact(gen_wheel(5)).value, 10);
}

TEST(Oracle, WitnessesVerify) {
  for (const HalinGraph& g : {gen_necklace(2), gen_necklace(5), gen_wheel(7), gen_double_wheel(4, 5)}) {
    expect_valid_witness(g.graph(), sei_exact(g));
  }
}

TEST(Oracle, AgreesWithPlainBacktracking) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const HalinGraph g = gen_random(seed, 3 + static_cast<int>(seed % 4), seed % 2 == 1);
    const OracleResult r = sei_exact(g);
    EXPECT_EQ(r.value, brute_force_sei(g.graph())) << "seed " << seed;
    expect_valid_witness(g.graph(), r);
  }
}

TEST(Oracle, CliqueBoundNeverExceedsValue) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const HalinGraph g = gen_random(seed, 8, false);
    const ConflictGraph cg = build_conflict_graph(g);
    const int clique = clique_lower_bound(cg);
    const int value = chromatic_number(cg).value;
    EXPECT_LE(clique, value);
    EXPECT_LE(value, greedy_color_count(cg));
  }
}

TEST(Oracle, EmptyAndTinyGraphs) {
  EXPECT_EQ(sei_exact(SimpleGraph(3)).value, 0);
  EXPECT_EQ(sei_exact(SimpleGraph(2, {{0, 1}})).value, 1);
  EXPECT_EQ(sei_exact(SimpleGraph(4, {{0, 1}, {2, 3}})).value, 1);
}

TEST(Oracle, BudgetIsEnforced) {
  const HalinGraph g = gen_random(4, 12, false);
  try {
    sei_exact(g, 1);
    SUCCEED();  // the greedy bound may already be optimal
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
  EXPECT_THROW(sei_exact(gen_necklace(6), 1), Error);
}

TEST(TreeOracle, MatchesDegreeFormula) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const SimpleGraph t = gen_random_tree(seed, 2 + static_cast<int>(seed % 11));
    int formula = 0;
    for (auto [u, v] : t.edges()) formula = std::max(formula, t.degree(u) + t.degree(v) - 1);
    const OracleResult r = tree_sei_exact(t);
    EXPECT_EQ(r.value, formula) << "seed " << seed;
    expect_valid_witness(t, r);
  }
}

TEST(TreeOracle, PlaneTreeEdgesMatchHalinPrefix) {
  const HalinGraph g = gen_random(2, 9, false);
  const OracleResult r = tree_sei_exact(g.tree());
  ASSERT_EQ(static_cast<int>(r.witness.colors.size()), g.tree_edge_count());
  for (int e = 0; e < g.tree_edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    EXPECT_EQ(ed.kind, EdgeKind::Tree);
  }
  EXPECT_EQ(r.value, tree_sei(g.tree()));
}
