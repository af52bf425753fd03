#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "pipbound/driver.hpp"
#include "pipbound/parser.hpp"

using namespace pipbound;

namespace {

PIP load(const std::string& name) {
  return parse_pip_file(std::string(PIPBOUND_PROGRAMS_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("injected baselines flow through to exact expected bounds") {
  PIP p = load("leading.pip");
  Bound X = Bound::variable("x"), Y = Bound::variable("y");
  BoundPair fx;
  fx.rt[0] = Bound::constant(1);
  fx.rt[1] = X;
  fx.rt[2] = Bound::infinity();
  fx.rt[3] = Bound::constant(1);
  fx.rt[4] = Bound::infinity();
  for (int t = 0; t <= 4; ++t) fx.sz[{t, "y"}] = Bound::infinity();
  fx.sz[{0, "y"}] = Y;
  fx.sz[{0, "x"}] = X;
  fx.sz[{1, "x"}] = X;
  fx.sz[{2, "x"}] = X;
  fx.sz[{3, "x"}] = X * Rational(3);
  fx.sz[{4, "x"}] = X * Rational(3);

  AnalyzeConfig cfg;
  cfg.fixture = fx;
  AnalysisReport rep = analyze(p, cfg);

  CHECK(rep.rt_e.at(0).str() == "1");
  CHECK(rep.rt_e.at(1).str() == "2*x");
  CHECK(rep.rt_e.at(2).str() == "1");
  CHECK(rep.rt_e.at(3).str() == "6*x^2 + 2*y");
  CHECK(rep.sz_e.at(Grv{0, "l1", "x"}).str() == "x");
  CHECK(rep.sz_e.at(Grv{0, "l1", "y"}).str() == "y");
  CHECK(rep.sz_e.at(Grv{1, "l1", "x"}).str() == "2*x");
  CHECK(rep.sz_e.at(Grv{1, "l1", "y"}).str() == "6*x^2 + y");
  CHECK(rep.sz_e.at(Grv{2, "l2", "x"}).str() == "3*x");
  CHECK(rep.sz_e.at(Grv{2, "l2", "y"}).str() == "6*x^2 + 2*y");
  CHECK(rep.sz_e.at(Grv{3, "l2", "y"}).str() == "12*x^2 + 4*y");
  CHECK(rep.total.str() == "6*x^2 + 2*x + 2*y + 2");
  CHECK(rep.cls().str() == "O(n^2)");
  CHECK(rep.stop_reason == "all_finite");
}

TEST_CASE("two-phase loop program analyzes to a quadratic total") {
  AnalysisReport rep = analyze(load("leading.pip"));
  CHECK(rep.rt_e.at(1).str() == "2*x");
  CHECK(rep.rt_e.at(3).str() == "10*x^2 + 4*x + 2*y");
  CHECK(rep.total.str() == "10*x^2 + 6*x + 2*y + 2");
  CHECK(rep.cls().str() == "O(n^2)");
  CHECK(rep.iterations == 3);
  CHECK(rep.stop_reason == "all_finite");
}

TEST_CASE("geometric resets keep the expected total linear") {
  AnalysisReport rep = analyze(load("preliminaries.pip"));
  CHECK(rep.rt_e.at(2).str() == "2*x + 21");
  CHECK(rep.total.str() == "2*x + 23");
  CHECK(rep.cls().str() == "O(n)");
  CHECK(rep.stop_reason == "fixpoint");
  // The variable reset by an arbitrary temporary stays unbounded...
  CHECK(rep.sz_e.at(Grv{0, "l2", "x"}).is_infinite());
  // ...but that location is terminal, so the total is unaffected.
}

TEST_CASE("boxed nested loop is constant time") {
  AnalysisReport rep = analyze(load("incorrectness.pip"));
  CHECK(rep.total.str() == "43");
  CHECK(rep.cls().str() == "O(1)");
  // The inner countdown runs 14/3 times in expectation; the bound must
  // dominate that.
  CHECK(rep.rt_e.at(3).eval_state(State{}).value >= rat_frac(14, 3));
}

TEST_CASE("one-shot square keeps a constant runtime but quadratic size") {
  AnalysisReport rep = analyze(load("concavity.pip"));
  CHECK(rep.total.str() == "2");
  CHECK(rep.cls().str() == "O(1)");
  CHECK(rep.sz_e.at(Grv{0, "l1", "x"}).str() == "x + 16");
  CHECK(rep.sz_e.at(Grv{1, "l2", "x"}).str() == "x^2 + 34*x + 288");
  // E[(UNIF(1,15))^2] = 248/3: the inferred size must dominate it at x = 0.
  CHECK(rep.sz_e.at(Grv{1, "l2", "x"}).eval_state(State{{"x", 0}}).value >=
        rat_frac(248, 3));
}

TEST_CASE("adversarial shrink still gets a linear expected runtime") {
  AnalysisReport rep = analyze(load("nondet_countdown.pip"));
  CHECK(rep.rt_e.at(1).str() == "4*x");
  CHECK(rep.rt_e.at(2).str() == "4*x");
  CHECK(rep.total.str() == "8*x + 1");
  CHECK(rep.cls().str() == "O(n)");
  // Loop sizes are genuinely unbounded: the scheduler may pick any jump.
  CHECK(rep.sz_e.at(Grv{1, "l1", "x"}).is_infinite());
}

TEST_CASE("program whose rules all die in preprocessing") {
  AnalysisReport rep = analyze(load("empty.pip"));
  CHECK(rep.total.is_zero());
  CHECK(rep.cls().str() == "O(1)");
  CHECK(rep.iterations == 0);
  CHECK(rep.stop_reason == "empty");
}

TEST_CASE("round budget cuts the alternation off") {
  AnalyzeConfig cfg;
  cfg.max_rounds = 1;
  AnalysisReport rep = analyze(load("nondet_countdown.pip"), cfg);
  CHECK(rep.iterations == 1);
  CHECK(rep.stop_reason == "max_rounds");
}

TEST_CASE("wall-clock budget interrupts between passes") {
  AnalyzeConfig cfg;
  cfg.timeout_secs = 1e-9;
  AnalysisReport rep = analyze(load("leading.pip"), cfg);
  CHECK(rep.stop_reason == "timeout");
  // Bounds stay sound (possibly infinite), never absent.
  for (auto& g : rep.prog.gts) CHECK(rep.rt_e.count(g.id) == 1);
}

TEST_CASE("reports are deterministic") {
  std::string a = render_text(analyze(load("leading.pip")));
  std::string b = render_text(analyze(load("leading.pip")));
  REQUIRE(a == b);
  REQUIRE(a.find("Total: 10*x^2 + 6*x + 2*y + 2\n") != std::string::npos);
  REQUIRE(a.find("Class: O(n^2)\n") != std::string::npos);
  REQUIRE(a.find("Iterations: 3 (all_finite)\n") != std::string::npos);
}

TEST_CASE("json report carries the same content as the text report") {
  AnalysisReport rep = analyze(load("leading.pip"));
  auto j = nlohmann::json::parse(render_json(rep));
  REQUIRE(j["total"] == "10*x^2 + 6*x + 2*y + 2");
  REQUIRE(j["class"] == "O(n^2)");
  REQUIRE(j["iterations"] == 3);
  REQUIRE(j["general_transitions"].size() == 4);
  bool found = false;
  for (auto& g : j["general_transitions"])
    if (g["name"] == "g1") {
      REQUIRE(g["rt"] == "2*x");
      found = true;
    }
  REQUIRE(found);
  REQUIRE(j["grvs"].size() == rep.sz_e.size());
}
