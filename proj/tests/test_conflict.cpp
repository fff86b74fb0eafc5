#include <gtest/gtest.h>

#include <queue>

#include "halin/conflict.hpp"
#include "halin/generators.hpp"
#include "halin/oracle.hpp"

using namespace halin;

namespace {

// Distance between edges in the line graph, by BFS; conflict means distance <= 2
// there (one edge in between at most), i.e. edge distance at most one in G.
bool conflict_by_line_graph(const SimpleGraph& g, int e, int f) {
  const int m = g.edge_count();
  std::vector<int> dist(m, -1);
  std::queue<int> q;
  dist[e] = 0;
  q.push(e);
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    auto [u, v] = g.edge(a);
    for (int b = 0; b < m; ++b) {
      if (dist[b] >= 0) continue;
      auto [x, y] = g.edge(b);
      if (x == u || x == v || y == u || y == v) {
        dist[b] = dist[a] + 1;
        q.push(b);
      }
    }
  }
  return dist[f] >= 1 && dist[f] <= 2;
}

}  // namespace

TEST(EdgesConflict, K4AllPairs) {
  const HalinGraph g = gen_wheel(3);
  for (int e = 0; e < 6; ++e)
    for (int f = 0; f < 6; ++f)
      if (e != f) {
        EXPECT_TRUE(edges_conflict(g, e, f));
      }
}

TEST(EdgesConflict, DistanceTwoOnLongCycle) {
  SimpleGraph c(8);
  for (int i = 0; i < 8; ++i) c.add_edge(i, (i + 1) % 8);
  c.finalize();
  EXPECT_FALSE(edges_conflict(c, 1, 4));  // (1,2) and (4,5)
  EXPECT_TRUE(edges_conflict(c, 1, 3));   // (1,2) and (3,4), joined by (2,3)
  EXPECT_TRUE(edges_conflict(c, 1, 2));
}

TEST(EdgesConflict, RejectsBadArguments) {
  const HalinGraph g = gen_wheel(4);
  EXPECT_THROW(edges_conflict(g, 0, 0), Error);
  EXPECT_THROW(edges_conflict(g, 0, 99), Error);
  EXPECT_THROW(edges_conflict(g, -1, 2), Error);
}

// The relation includes pairs whose endpoints induce C4 (opposite edges of a square).
TEST(EdgesConflict, OppositeSidesOfASquare) {
  SimpleGraph sq(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  EXPECT_TRUE(edges_conflict(sq, 0, 2));
}

TEST(ConflictGraph, MatchesLineGraphDistance) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const HalinGraph g = gen_random(seed, 9, seed % 3 == 0);
    const ConflictGraph cg = build_conflict_graph(g);
    for (int e = 0; e < g.edge_count(); ++e)
      for (int f = 0; f < g.edge_count(); ++f) {
        if (e == f) continue;
        const bool expected = conflict_by_line_graph(g.graph(), e, f);
        EXPECT_EQ(cg.conflicts(e, f), expected) << e << " " << f;
        EXPECT_EQ(edges_conflict(g, e, f), expected);
      }
  }
}

TEST(ConflictGraph, K4AndPrismAreComplete) {
  const ConflictGraph k4 = build_conflict_graph(gen_wheel(3));
  EXPECT_EQ(k4.pair_count(), 15u);
  const ConflictGraph prism = build_conflict_graph(gen_necklace(2));
  EXPECT_EQ(prism.pair_count(), 36u);
}

TEST(ConflictGraph, W5CliqueIsTen) {
  EXPECT_EQ(clique_lower_bound(build_conflict_graph(gen_wheel(5))), 10);
}

TEST(ConflictGraph, SymmetricAndIrreflexive) {
  const ConflictGraph cg = build_conflict_graph(gen_random(5, 30, false));
  for (int e = 0; e < cg.size(); ++e) {
    EXPECT_FALSE(cg.conflicts(e, e));
    for (int f : cg.neighbors(e)) EXPECT_TRUE(cg.conflicts(f, e));
  }
}

// Deleting an edge of G never creates a conflict among the remaining edges.
TEST(ConflictGraph, EdgeDeletionIsMonotone) {
  const HalinGraph h = gen_random(8, 10, false);
  const SimpleGraph& g = h.graph();
  for (int drop = 0; drop < g.edge_count(); ++drop) {
    std::vector<std::pair<int, int>> kept;
    std::vector<int> original;
    for (int e = 0; e < g.edge_count(); ++e)
      if (e != drop) {
        kept.push_back(g.edge(e));
        original.push_back(e);
      }
    const SimpleGraph smaller(g.vertex_count(), kept);
    for (int a = 0; a < smaller.edge_count(); ++a)
      for (int b = a + 1; b < smaller.edge_count(); ++b)
        if (edges_conflict(smaller, a, b)) {
          EXPECT_TRUE(edges_conflict(g, original[a], original[b]));
        }
  }
}

TEST(Verify, K4DistinctAndRepeated) {
  const HalinGraph g = gen_wheel(3);
  EdgeColoring c{6, {0, 1, 2, 3, 4, 5}};
  EXPECT_TRUE(verify_strong_coloring(g, c).ok);
  c.colors[4] = 1;
  const VerifyResult r = verify_strong_coloring(g, c);
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations.front(), std::make_pair(1, 4));
  EXPECT_NE(format_violations(r).find("(1, 4)"), std::string::npos);
}

TEST(Verify, SixCycleThreeColours) {
  SimpleGraph c(6);
  for (int i = 0; i < 6; ++i) c.add_edge(i, (i + 1) % 6);
  c.finalize();
  EXPECT_TRUE(verify_strong_coloring(c, EdgeColoring{3, {0, 1, 2, 0, 1, 2}}).ok);
  EXPECT_FALSE(verify_strong_coloring(c, EdgeColoring{3, {0, 1, 0, 1, 2, 2}}).ok);
}

TEST(Verify, IncompleteColoringThrows) {
  const HalinGraph g = gen_wheel(3);
  try {
    verify_strong_coloring(g, EdgeColoring{6, {0, 1, 2, -1, 4, 5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IncompleteColoring);
  }
}

TEST(Verify, ColourOutsidePaletteIsReported) {
  const HalinGraph g = gen_wheel(3);
  const VerifyResult r = verify_strong_coloring(g, EdgeColoring{5, {0, 1, 2, 3, 4, 5}});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.violations.front(), std::make_pair(5, 5));
}
