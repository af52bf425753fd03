#include <catch2/catch_amalgamated.hpp>

#include "pipbound/parser.hpp"
#include "pipbound/preprocess.hpp"

using namespace pipbound;

TEST_CASE("rules with unsatisfiable guards are dropped") {
  PIP p = parse_pip(R"(
vars x
start l0
l0 -> l1(x = x+1) :|: 0 > 1
)");
  PIP q = preprocess(p, true);
  REQUIRE(q.gts.empty());
  REQUIRE(q.pvars == p.pvars);
  REQUIRE(q.start == p.start);
}

TEST_CASE("rules out of reach of the start location are dropped") {
  PIP p = parse_pip(R"(
vars x
start l0
l0 -> l1()
l5 -> l6(x = x+1)
l1 -> l1(x = x-1) :|: x > 0
)");
  PIP q = preprocess(p, true);
  REQUIRE(q.gts.size() == 2);
  for (const auto& g : q.gts) {
    REQUIRE(g.source != "l5");
    for (const auto& t : g.members) REQUIRE(t.target != "l6");
  }
}

TEST_CASE("surviving rules and members are renumbered densely") {
  PIP p = parse_pip(R"(
vars x
start l0
l0 -> l1()
l1 -> 1/2: l1(x = x-1) (+) 1/2: l2() :|: 0 > 1
l1 -> l2()
l2 -> l2(x = x-1) :|: x > 0
)");
  PIP q = preprocess(p, true);
  REQUIRE(q.gts.size() == 3);
  int next_member = 0;
  for (size_t i = 0; i < q.gts.size(); ++i) {
    REQUIRE(q.gts[i].id == static_cast<int>(i));
    for (const auto& t : q.gts[i].members) REQUIRE(t.id == next_member++);
  }
  REQUIRE(q.transition_count() == next_member);
}

TEST_CASE("interval invariants tighten guards along the flow") {
  // x starts in {1,2,3}, is copied to z, z to y, and only ever counts down
  // while staying checked against small constants, so every location keeps
  // all three variables inside a small box.
  PIP p = parse_pip_file(std::string(PIPBOUND_PROGRAMS_DIR) + "/incorrectness.pip");

  PIP with = preprocess(p, true);
  const Constraint& inner = with.gts[3].guard;  // the y-countdown self-loop
  REQUIRE(inner.satisfied_by(State{{"x", 2}, {"y", 3}, {"z", 2}}));
  REQUIRE(!inner.satisfied_by(State{{"x", 4}, {"y", 2}, {"z", 2}}));
  REQUIRE(!inner.satisfied_by(State{{"x", 2}, {"y", 4}, {"z", 2}}));

  PIP without = preprocess(p, false);
  const Constraint& plain = without.gts[3].guard;
  REQUIRE(plain.satisfied_by(State{{"x", 4}, {"y", 2}, {"z", 2}}));
  REQUIRE(plain.satisfied_by(State{{"x", 2}, {"y", 4}, {"z", 2}}));
}

TEST_CASE("preprocessing leaves an already-tight program intact") {
  PIP p = parse_pip_file(std::string(PIPBOUND_PROGRAMS_DIR) + "/leading.pip");
  PIP q = preprocess(p, true);
  REQUIRE(q.gts.size() == p.gts.size());
  for (size_t i = 0; i < q.gts.size(); ++i) {
    REQUIRE(q.gts[i].source == p.gts[i].source);
    REQUIRE(q.gts[i].members.size() == p.gts[i].members.size());
  }
}

TEST_CASE("guard satisfiability probe") {
  Constraint c;
  c.add(Polynomial::variable("x"), CmpOp::Gt, Polynomial::constant(0));
  REQUIRE(guard_satisfiable(c));
  Constraint f;
  f.add(Polynomial::constant(0), CmpOp::Gt, Polynomial::constant(1));
  REQUIRE(!guard_satisfiable(f));
  // Contradictory pair on one variable.
  Constraint g;
  g.add(Polynomial::variable("x"), CmpOp::Ge, Polynomial::constant(5));
  g.add(Polynomial::variable("x"), CmpOp::Le, Polynomial::constant(2));
  REQUIRE(!guard_satisfiable(g));
}
