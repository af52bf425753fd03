#include <catch2/catch_amalgamated.hpp>

#include "pipbound/parser.hpp"
#include "pipbound/preprocess.hpp"
#include "pipbound/sim.hpp"

using namespace pipbound;

namespace {

PIP load(const std::string& name) {
  return preprocess(parse_pip_file(std::string(PIPBOUND_PROGRAMS_DIR) + "/" + name), true);
}

}  // namespace

TEST_CASE("single steps follow guards, probabilities and updates") {
  PIP p = load("leading.pip");
  Scheduler sch;  // first-enabled
  Rng rng(1);

  Config c0;
  c0.loc = "l0";
  c0.state = State{{"x", 2}, {"y", 0}};
  Config c1 = step(p, c0, sch, rng);
  REQUIRE(c1.loc == "l1");
  REQUIRE(c1.state.at("x") == 2);
  REQUIRE(!c1.terminal);

  // From l1 with x = 0 the loop guard fails; the phase change must fire.
  Config c2;
  c2.loc = "l1";
  c2.state = State{{"x", 0}, {"y", 7}};
  Config c3 = step(p, c2, sch, rng);
  REQUIRE(c3.loc == "l2");

  // From l2 with y = 0 nothing is enabled: the run is terminal.
  Config c4;
  c4.loc = "l2";
  c4.state = State{{"x", 0}, {"y", 0}};
  Config c5 = step(p, c4, sch, rng);
  REQUIRE(c5.terminal);
}

TEST_CASE("estimates are reproducible for a fixed seed") {
  PIP p = load("leading.pip");
  Scheduler sch;
  SimStats a = estimate(p, State{{"x", 3}, {"y", 0}}, sch, 500, 10000, 42);
  SimStats b = estimate(p, State{{"x", 3}, {"y", 0}}, sch, 500, 10000, 42);
  REQUIRE(a.count_mean == b.count_mean);
  REQUIRE(a.size_mean == b.size_mean);
  REQUIRE(a.cost_mean == b.cost_mean);
  SimStats c = estimate(p, State{{"x", 3}, {"y", 0}}, sch, 500, 10000, 43);
  REQUIRE(a.count_mean != c.count_mean);  // different seed, different draws
}

TEST_CASE("coin-flip loop runs 2x times in expectation") {
  PIP p = load("leading.pip");
  Scheduler sch;
  SimStats st = estimate(p, State{{"x", 3}, {"y", 0}}, sch, 20000, 100000, 7);
  REQUIRE(st.completed == st.trials);
  double mean = st.count_mean.at(1);
  double se = st.count_se.at(1);
  REQUIRE(std::abs(mean - 6.0) <= 4 * se + 1e-9);
  // The phase-change rule fires exactly once per run.
  REQUIRE(st.count_mean.at(2) == 1.0);
  REQUIRE(st.count_se.at(2) == 0.0);
}

TEST_CASE("nested countdown hits its inner loop 14/3 times in expectation") {
  PIP p = load("incorrectness.pip");
  Scheduler sch;
  SimStats st = estimate(p, State{}, sch, 20000, 100000, 11);
  double mean = st.count_mean.at(3);
  double se = st.count_se.at(3);
  REQUIRE(std::abs(mean - 14.0 / 3.0) <= 4 * se + 1e-9);
  REQUIRE(se < 0.05);
}

TEST_CASE("squared uniform sample averages to E[u^2] = 248/3") {
  PIP p = load("concavity.pip");
  Scheduler sch;
  // Per-draw spread of u^2 is about 71, so 400k trials puts the standard
  // error near 0.11 and the +-0.5 window at more than four sigma.
  SimStats st = estimate(p, State{{"x", 0}}, sch, 400000, 1000, 13);
  double mean = st.size_mean.at(Grv{1, "l2", "x"});
  REQUIRE(std::abs(mean - 248.0 / 3.0) <= 0.5);
}

TEST_CASE("scripted scheduler forces a chosen branch when enabled") {
  PIP p = load("preliminaries.pip");
  // Step 0 chooses between g0 (jump with a positive temporary) and g1
  // (probabilistic no-op/decrement). Scripting g1 avoids the jump.
  Scheduler sch;
  sch.kind = SchedulerKind::Scripted;
  sch.script = {1};
  Rng rng(3);
  Config c0;
  c0.loc = "l0";
  c0.state = State{{"x", 20}};
  Config c1 = step(p, c0, sch, rng, 0);
  REQUIRE(c1.loc == "l1");

  sch.script = {0};
  Rng rng2(3);
  Config c2 = step(p, c0, sch, rng2, 0);
  REQUIRE(c2.loc == "l2");
}

TEST_CASE("random scheduler terminates the adversarial program") {
  PIP p = load("nondet_countdown.pip");
  Scheduler sch;
  sch.kind = SchedulerKind::RandomEnabled;
  SimStats st = estimate(p, State{{"x", 3}}, sch, 2000, 100000, 17);
  REQUIRE(st.completed == st.trials);
  REQUIRE(st.termination_fraction == 1.0);
  // Expected bound: count(g1) <= 4x = 12 regardless of scheduler.
  REQUIRE(st.count_mean.at(1) <= 12.0);
}

TEST_CASE("non-terminating program exhausts the step cap") {
  PIP p = preprocess(parse_pip(R"(
vars x
start l0
l0 -> l1()
l1 -> l1(x = x+1)
)"), true);
  Scheduler sch;
  SimStats st = estimate(p, State{{"x", 0}}, sch, 50, 200, 19);
  REQUIRE(st.cap_hits == st.trials);
  REQUIRE(st.completed == 0);
  REQUIRE(st.termination_fraction == 0.0);
}

TEST_CASE("faulting updates are counted and excluded") {
  // UNIF(3, 1) is an invalid range: every trial faults.
  PIP p = preprocess(parse_pip(R"(
vars x
start l0
l0 -> l1(x = UNIF(3, 1))
)"), true);
  Scheduler sch;
  SimStats st = estimate(p, State{{"x", 0}}, sch, 20, 100, 23);
  REQUIRE(st.faults == st.trials);
  REQUIRE(st.completed == 0);
}
