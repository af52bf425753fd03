#include <catch2/catch_amalgamated.hpp>

#include "pipbound/constraint.hpp"

using namespace pipbound;

namespace {
const Polynomial X = Polynomial::variable("x");
const Polynomial Y = Polynomial::variable("y");
}  // namespace

TEST_CASE("empty constraint is true") {
  Constraint c;
  REQUIRE(c.is_true());
  REQUIRE(!c.trivially_false());
  REQUIRE(c.satisfied_by(State{}));
}

TEST_CASE("strict comparisons normalize to non-strict integer atoms") {
  // x > 0 over the integers means x - 1 >= 0.
  Constraint c;
  c.add(X, CmpOp::Gt, Polynomial::constant(0));
  REQUIRE(!c.satisfied_by(State{{"x", 0}}));
  REQUIRE(c.satisfied_by(State{{"x", 1}}));
  auto atoms = c.linear_atoms();
  REQUIRE(atoms.size() == 1);
  REQUIRE(atoms[0] == X - Polynomial::constant(1));
}

TEST_CASE("all comparison operators") {
  Constraint c;
  c.add(X, CmpOp::Le, Y);
  REQUIRE(c.satisfied_by(State{{"x", 2}, {"y", 2}}));
  REQUIRE(!c.satisfied_by(State{{"x", 3}, {"y", 2}}));

  Constraint lt;
  lt.add(X, CmpOp::Lt, Y);
  REQUIRE(!lt.satisfied_by(State{{"x", 2}, {"y", 2}}));
  REQUIRE(lt.satisfied_by(State{{"x", 1}, {"y", 2}}));

  Constraint eq;
  eq.add(X, CmpOp::Eq, Polynomial::constant(4));
  REQUIRE(eq.satisfied_by(State{{"x", 4}}));
  REQUIRE(!eq.satisfied_by(State{{"x", 5}}));
  REQUIRE(!eq.satisfied_by(State{{"x", 3}}));
}

TEST_CASE("fractional strict bounds tighten to integers") {
  // 2x > 1 over the integers: 2x - 2 >= 0, i.e. x >= 1.
  Constraint c;
  c.add(X * Rational(2), CmpOp::Gt, Polynomial::constant(1));
  REQUIRE(!c.satisfied_by(State{{"x", 0}}));
  REQUIRE(c.satisfied_by(State{{"x", 1}}));
}

TEST_CASE("conjoin accumulates atoms") {
  Constraint a, b;
  a.add(X, CmpOp::Ge, Polynomial::constant(1));
  b.add(Y, CmpOp::Ge, X);
  a.conjoin(b);
  REQUIRE(a.satisfied_by(State{{"x", 1}, {"y", 1}}));
  REQUIRE(!a.satisfied_by(State{{"x", 1}, {"y", 0}}));
  REQUIRE(a.vars() == std::set<Var>{"x", "y"});
}

TEST_CASE("contradictory constant atoms are trivially false") {
  Constraint c;
  c.add(Polynomial::constant(0), CmpOp::Gt, Polynomial::constant(1));
  REQUIRE(c.trivially_false());
  REQUIRE(!c.satisfied_by(State{}));
}

TEST_CASE("nonlinear atoms are kept separately") {
  Constraint c;
  c.add(X * X, CmpOp::Le, Polynomial::constant(9));
  REQUIRE(c.has_nonlinear());
  REQUIRE(c.linear_atoms().empty());
  REQUIRE(c.nonlinear_atoms().size() == 1);
  REQUIRE(c.satisfied_by(State{{"x", -3}}));
  REQUIRE(!c.satisfied_by(State{{"x", 4}}));
}

TEST_CASE("substitution rewrites atoms") {
  Constraint c;
  c.add(X, CmpOp::Ge, Polynomial::constant(1));
  Constraint d = c.substitute({{"x", X + Y}});
  REQUIRE(d.satisfied_by(State{{"x", 0}, {"y", 1}}));
  REQUIRE(!d.satisfied_by(State{{"x", 0}, {"y", 0}}));
}
