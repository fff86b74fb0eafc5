#include <gtest/gtest.h>

#include "halin/closed_form.hpp"
#include "halin/generators.hpp"
#include "halin/oracle.hpp"

using namespace halin;

TEST(CycleSei, SmallTable) {
  const int expected[] = {3, 4, 5, 3, 4, 4, 3, 4, 4, 3};  // n = 3..12
  for (int n = 3; n <= 12; ++n) EXPECT_EQ(cycle_sei(n), expected[n - 3]) << n;
  EXPECT_THROW(cycle_sei(2), Error);
}

TEST(CycleSei, MatchesOracleOnCycles) {
  for (int n = 3; n <= 11; ++n) {
    SimpleGraph c(n);
    for (int i = 0; i < n; ++i) c.add_edge(i, (i + 1) % n);
    c.finalize();
    EXPECT_EQ(sei_exact(c).value, cycle_sei(n)) << n;
  }
}

TEST(WheelSei, SmallTable) {
  EXPECT_EQ(wheel_sei(3), 6);
  EXPECT_EQ(wheel_sei(4), 8);
  EXPECT_EQ(wheel_sei(5), 10);
  EXPECT_EQ(wheel_sei(6), 9);
  EXPECT_EQ(wheel_sei(7), 11);
  EXPECT_EQ(wheel_sei(30), 33);
  EXPECT_EQ(wheel_sei(31), 35);
  EXPECT_THROW(wheel_sei(2), Error);
}

TEST(DoubleWheelSei, Cases) {
  EXPECT_EQ(double_wheel_sei(3, 3), 9);
  EXPECT_EQ(double_wheel_sei(3, 4), 8);
  EXPECT_EQ(double_wheel_sei(6, 3), 10);
  EXPECT_EQ(double_wheel_sei(4, 4), 8);
  EXPECT_EQ(double_wheel_sei(5, 7), 12);
  EXPECT_THROW(double_wheel_sei(2, 4), Error);
}

TEST(TreeSei, Formula) {
  EXPECT_EQ(tree_sei(SimpleGraph(2, {{0, 1}})), 1);
  EXPECT_EQ(tree_sei(SimpleGraph(4, {{0, 1}, {1, 2}, {2, 3}})), 3);
  EXPECT_EQ(tree_sei(SimpleGraph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})), 4);
  EXPECT_THROW(tree_sei(SimpleGraph(1)), Error);
  EXPECT_EQ(tree_sei(gen_necklace(2).tree()), 5);
}

TEST(Bounds, Examples) {
  auto check = [](const HalinGraph& g, int t, int eq1, int eq2) {
    const BoundReport b = bounds(g);
    EXPECT_EQ(b.tree_sei, t);
    EXPECT_EQ(b.lower_bound, t);
    EXPECT_EQ(b.upper_eq1, eq1);
    EXPECT_EQ(b.upper_eq2, eq2);
  };
  check(gen_necklace(2), 5, 9, 10);
  check(gen_wheel(3), 3, 6, 10);
  check(gen_wheel(6), 6, 9, 16);
}

TEST(Dispatch, OnlyWheelsAndDoubleWheels) {
  EXPECT_EQ(dispatch_closed_form(gen_wheel(5)), 10);
  EXPECT_EQ(dispatch_closed_form(gen_double_wheel(5, 3)), 9);
  EXPECT_EQ(dispatch_closed_form(gen_necklace(2)), 9);
  EXPECT_FALSE(dispatch_closed_form(gen_necklace(3)).has_value());
}

TEST(Dispatch, AgreesWithOracleOnSmallFamilies) {
  for (int n = 3; n <= 8; ++n) EXPECT_EQ(sei_exact(gen_wheel(n)).value, wheel_sei(n)) << n;
  for (int dx = 3; dx <= 5; ++dx)
    for (int dy = dx; dy <= 5; ++dy)
      EXPECT_EQ(sei_exact(gen_double_wheel(dx, dy)).value, double_wheel_sei(dx, dy)) << dx << "," << dy;
}
