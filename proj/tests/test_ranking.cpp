#include <catch2/catch_amalgamated.hpp>

#include "pipbound/parser.hpp"
#include "pipbound/ranking.hpp"

using namespace pipbound;

namespace {

PIP two_phase() {
  // l1 loops on x > 0, halving progress in expectation; l2 counts y down.
  return parse_pip(R"(
vars x y
start l0
l0 -> l1()
l1 -> 1/2: l1(x = x-1, y = y+x) (+) 1/2: l1(y = y+x) :|: x > 0
l1 -> l2()
l2 -> l2(y = y-1) :|: y > 0
)");
}

PIP adversarial_jump() {
  // y is a temporary: the inner transition can shrink x by any positive amount.
  return parse_pip(R"(
vars x
start l0
l0 -> l1() :|: x > 0
l1 -> 1/2: l1() (+) 1/4: l2() (+) 1/4: l2(x = x+1) :|: x > 0
l2 -> l1(x = x-y) :|: y > 0
)");
}

PIP geometric_reset() {
  return parse_pip(R"(
vars x
start l0
l0 -> l2(x = u) :|: u > 0
l0 -> 3/4: l1() (+) 1/4: l1(x = x-1)
l1 -> l1(x = GEO(1/2)) :|: x < 10
)");
}

}  // namespace

TEST_CASE("minimal ranking function for an expected-halving loop") {
  PIP p = two_phase();
  auto rf = synthesize_plrf(p, {1}, {1}, RankMode::Probabilistic);
  REQUIRE(rf.has_value());
  // Drop is 1/2 per round, so the slope must reach 2; the l1 objective
  // zeroes everything else.
  REQUIRE(rf->at("l1") == Polynomial::variable("x") * Rational(2));
  Rng rng(7);
  REQUIRE(!verify_plrf(p, *rf, 1000, rng).has_value());
}

TEST_CASE("deterministic countdown ranks by the counter itself") {
  PIP p = two_phase();
  auto rf = synthesize_plrf(p, {3}, {3}, RankMode::Probabilistic);
  REQUIRE(rf.has_value());
  REQUIRE(rf->at("l2") == Polynomial::variable("y"));
  Rng rng(8);
  REQUIRE(!verify_plrf(p, *rf, 1000, rng).has_value());
}

TEST_CASE("candidate loop sets come from location SCCs plus the singleton") {
  PIP p = two_phase();
  auto cands = candidate_gtni(p, 1);
  REQUIRE(cands == std::vector<std::set<int>>{{1}});

  PIP q = adversarial_jump();
  auto cands2 = candidate_gtni(q, 1);
  REQUIRE(cands2 == std::vector<std::set<int>>{{1, 2}, {1}});
}

TEST_CASE("unbounded adversarial shrink forces a constant rank") {
  PIP q = adversarial_jump();
  // Ranking both loop transitions together is impossible: the temporary can
  // push x arbitrarily far down, so no affine map decreases on g2 while
  // staying non-negative.
  REQUIRE(!synthesize_plrf(q, {2}, {1, 2}, RankMode::Probabilistic).has_value());
  // Alone, g2 admits only the constant certificate.
  auto rf = synthesize_plrf(q, {2}, {2}, RankMode::Probabilistic);
  REQUIRE(rf.has_value());
  REQUIRE(rf->at("l2") == Polynomial::constant(1));
  REQUIRE(rf->at("l1") == Polynomial());
  Rng rng(9);
  REQUIRE(!verify_plrf(q, *rf, 1000, rng).has_value());
}

TEST_CASE("unbounded sampling support defeats probabilistic ranking") {
  PIP p = geometric_reset();
  // The loop adds a geometric sample to x, so the expected value rises and
  // no affine function can certify an expected decrease.
  REQUIRE(!synthesize_plrf(p, {2}, {2}, RankMode::Probabilistic).has_value());
}

TEST_CASE("degenerate requests are rejected") {
  PIP p = two_phase();
  REQUIRE(!synthesize_plrf(p, {}, {1}, RankMode::Probabilistic).has_value());
  // gt_decr must be contained in gt_ni.
  REQUIRE(!synthesize_plrf(p, {1}, {3}, RankMode::Probabilistic).has_value());
}

TEST_CASE("sampling verifier catches an insufficient expected drop") {
  PIP p = two_phase();
  PLRF bad;
  bad.r["l1"] = Polynomial::variable("x");  // drops only 1/2 per round
  bad.gt_decr = {1};
  bad.gt_ni = {1};
  bad.mode = RankMode::Probabilistic;
  Rng rng(10);
  auto msg = verify_plrf(p, bad, 1000, rng);
  REQUIRE(msg.has_value());
  REQUIRE(msg->find("Decrease violated") != std::string::npos);
}

TEST_CASE("sampling verifier catches a rank that can go negative") {
  PIP p = two_phase();
  PLRF bad;
  bad.r["l2"] = Polynomial::variable("y") - Polynomial::constant(5);
  bad.gt_decr = {3};
  bad.gt_ni = {3};
  bad.mode = RankMode::Probabilistic;
  Rng rng(11);
  auto msg = verify_plrf(p, bad, 1000, rng);
  REQUIRE(msg.has_value());
}
