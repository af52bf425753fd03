#include <catch2/catch_amalgamated.hpp>

#include "pipbound/lp.hpp"

using namespace pipbound;

TEST_CASE("feasible system yields an exact rational witness") {
  // x + y == 1, x - y >= 1/3, x,y >= 0
  LpProblem lp;
  int x = lp.add_var(true);
  int y = lp.add_var(true);
  lp.add_row({{x, 1}, {y, 1}}, RowOp::Eq, 1);
  lp.add_row({{x, 1}, {y, -1}}, RowOp::Ge, rat_frac(1, 3));
  auto sol = lp.solve();
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[x] + (*sol)[y] == 1);
  REQUIRE((*sol)[x] - (*sol)[y] >= rat_frac(1, 3));
  REQUIRE((*sol)[x] >= 0);
  REQUIRE((*sol)[y] >= 0);
}

TEST_CASE("infeasible system returns nullopt") {
  LpProblem lp;
  int x = lp.add_var(true);
  lp.add_row({{x, 1}}, RowOp::Le, -1);  // x <= -1 with x >= 0
  REQUIRE(!lp.solve().has_value());

  LpProblem lp2;
  int a = lp2.add_var(false);
  lp2.add_row({{a, 1}}, RowOp::Ge, 2);
  lp2.add_row({{a, 1}}, RowOp::Le, 1);
  REQUIRE(!lp2.solve().has_value());
}

TEST_CASE("free variables may go negative") {
  LpProblem lp;
  int x = lp.add_var(false);
  lp.add_row({{x, 1}}, RowOp::Le, -5);
  auto sol = lp.solve();
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[x] <= -5);
}

TEST_CASE("l1 minimization picks the smallest-magnitude witness") {
  // x >= 1/2 feasible for any larger x too; minimizing |x| pins x = 1/2.
  LpProblem lp;
  int x = lp.add_var(true);
  int y = lp.add_var(true);
  lp.add_row({{x, 1}}, RowOp::Ge, rat_frac(1, 2));
  lp.add_row({{x, 1}, {y, 1}}, RowOp::Ge, 1);
  auto sol = lp.minimize_l1({x, y});
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[x] == rat_frac(1, 2));
  REQUIRE((*sol)[y] == rat_frac(1, 2));
}

TEST_CASE("l1 minimization handles free variables symmetrically") {
  // x free with x <= -2: minimal |x| is exactly 2.
  LpProblem lp;
  int x = lp.add_var(false);
  lp.add_row({{x, 1}}, RowOp::Le, -2);
  auto sol = lp.minimize_l1({x});
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[x] == -2);
}

TEST_CASE("degenerate equality chain solves exactly") {
  // a == b, b == c, a + b + c == 1 -> all 1/3.
  LpProblem lp;
  int a = lp.add_var(true), b = lp.add_var(true), c = lp.add_var(true);
  lp.add_row({{a, 1}, {b, -1}}, RowOp::Eq, 0);
  lp.add_row({{b, 1}, {c, -1}}, RowOp::Eq, 0);
  lp.add_row({{a, 1}, {b, 1}, {c, 1}}, RowOp::Eq, 1);
  auto sol = lp.solve();
  REQUIRE(sol.has_value());
  REQUIRE((*sol)[a] == rat_frac(1, 3));
  REQUIRE((*sol)[b] == rat_frac(1, 3));
  REQUIRE((*sol)[c] == rat_frac(1, 3));
}
