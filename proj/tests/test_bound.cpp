#include <catch2/catch_amalgamated.hpp>

#include "pipbound/bound.hpp"

using namespace pipbound;

namespace {
const Bound X = Bound::variable("x");
const Bound Y = Bound::variable("y");
}  // namespace

TEST_CASE("zero annihilates infinity") {
  Bound inf = Bound::infinity();
  REQUIRE((inf * Bound::zero()).is_zero());
  REQUIRE((Bound::zero() * inf).is_zero());
  REQUIRE((inf * Rational(0)).is_zero());
  REQUIRE((inf + Bound::zero()).is_infinite());
  REQUIRE((inf * X).is_infinite());
  REQUIRE((X + inf).is_infinite());
}

TEST_CASE("bound arithmetic behaves like polynomials on finite parts") {
  Bound b = X * Rational(2) + Y + Bound::constant(3);
  REQUIRE(b.is_linear());
  REQUIRE(!b.is_infinite());
  REQUIRE((X * X).poly_degree() == 2);
  REQUIRE(!(X * X).is_linear());
  REQUIRE(b.vars() == std::set<Var>{"x", "y"});
  REQUIRE((b + b) == b * Rational(2));
  REQUIRE(X.pow(3) == X * X * X);
}

TEST_CASE("negative constants are rejected") {
  REQUIRE_THROWS_AS(Bound::constant(Rational(-1)), std::invalid_argument);
}

TEST_CASE("ceiling overapproximation flips coefficient signs") {
  Polynomial p = Polynomial::variable("x") * Rational(-3) +
                 Polynomial::variable("y") - Polynomial::constant(2);
  Bound b = overapprox(p);
  REQUIRE(b == X * Rational(3) + Y + Bound::constant(2));
  // dominance at a sample point
  State s{{"x", -5}, {"y", 4}};
  Rational pv = p.eval_state(s);
  BoundEval bv = b.eval_state(s);
  REQUIRE(!bv.infinite);
  REQUIRE(bv.value >= rat_abs(pv));
}

TEST_CASE("evaluation uses absolute values of the state") {
  Bound b = X * X + Y;
  BoundEval ev = b.eval_state(State{{"x", -3}, {"y", -7}});
  REQUIRE(!ev.infinite);
  REQUIRE(ev.value == 16);
  REQUIRE(Bound::infinity().eval_state(State{}).infinite);
}

TEST_CASE("substitution replaces variables by bounds") {
  Bound b = X * X + Y;
  Bound r = b.substitute({{"x", Y + Bound::constant(1)}});
  BoundEval ev = r.eval_state(State{{"y", 2}});
  REQUIRE(ev.value == 11);  // (2+1)^2 + 2
  // substituting infinity propagates only where the variable occurs
  Bound s = (X + Bound::constant(1)).substitute({{"y", Bound::infinity()}});
  REQUIRE(!s.is_infinite());
  Bound t = (X + Y).substitute({{"y", Bound::infinity()}});
  REQUIRE(t.is_infinite());
}

TEST_CASE("constant-base exponentials") {
  Bound e = Bound::exp(Rational(2), X);
  REQUIRE(e.has_nonconst_exp());
  REQUIRE(!e.is_linear());
  REQUIRE(e.asym().kind == AsymptoticClass::Exp);
  BoundEval ev = e.eval_state(State{{"x", -5}});
  REQUIRE(ev.value == 32);
  REQUIRE(Bound::exp(Rational(2), Bound::constant(3)) == Bound::constant(8));
  REQUIRE_THROWS_AS(Bound::exp(rat_frac(1, 2), X), std::invalid_argument);
}

TEST_CASE("asymptotic classes order correctly") {
  REQUIRE(Bound::constant(7).asym().kind == AsymptoticClass::Const);
  REQUIRE((X * Y).asym() == AsymptoticClass::poly(2));
  REQUIRE(Bound::infinity().asym().kind == AsymptoticClass::Infinite);
  REQUIRE(AsymptoticClass::poly(1) < AsymptoticClass::poly(2));
  REQUIRE(AsymptoticClass::poly(9) < AsymptoticClass::exponential());
  REQUIRE(AsymptoticClass::exponential() < AsymptoticClass::infinite());
  REQUIRE(AsymptoticClass::poly(2).str() == "O(n^2)");
  REQUIRE(AsymptoticClass::poly(1).str() == "O(n)");
  REQUIRE(AsymptoticClass::constant().str() == "O(1)");
}

TEST_CASE("prefer keeps the asymptotically smaller bound") {
  REQUIRE(prefer(Bound::infinity(), X) == X);
  REQUIRE(prefer(X, Bound::infinity()) == X);
  REQUIRE(prefer(X * X, X) == X);
  REQUIRE(prefer(X, X * X) == X);
  // ties break towards fewer monomials
  REQUIRE(prefer(X + Bound::constant(1), X) == X);
}

TEST_CASE("rendering") {
  REQUIRE((X * Rational(2)).str() == "2*x");
  REQUIRE(Bound::infinity().str() == "inf");
  REQUIRE(Bound::zero().str() == "0");
  REQUIRE((X * X + Bound::constant(1)).str() == "x^2 + 1");
}
