#pragma once

// End-to-end analysis: preprocess the program, compute non-probabilistic
// bounds on the deterministic abstraction, lift them to expected bounds, and
// then alternate expected-size and expected-runtime improvement rounds until
// every bound is finite, nothing changes any more, or a round/time budget is
// exhausted.

#include <chrono>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "expsize.hpp"
#include "exprt.hpp"
#include "nonprob.hpp"
#include "pip.hpp"
#include "preprocess.hpp"

namespace pipbound {

struct AnalyzeConfig {
  int max_rounds = 5;
  double timeout_secs = 0;  // 0 disables the wall-clock budget
  bool invariants = true;
  // Replaces the computed non-probabilistic bounds (testing alternative
  // baselines without rerunning the deterministic analysis).
  std::optional<BoundPair> fixture;
  RuntimeImproveOptions rt_opts;
};

struct AnalysisReport {
  PIP prog;       // program after preprocessing; ids refer to it
  BoundPair base; // underlying non-probabilistic bounds
  std::map<int, Bound> rt_e;
  std::map<Grv, Bound> sz_e;
  Bound total = Bound::zero();
  int iterations = 0;
  std::string stop_reason;  // all_finite | fixpoint | max_rounds | timeout | empty
  double wall_secs = 0;

  AsymptoticClass cls() const { return total.asym(); }
};

inline AnalysisReport analyze(const PIP& p, const AnalyzeConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto expired = [&] {
    return cfg.timeout_secs > 0 && elapsed() > cfg.timeout_secs;
  };

  AnalysisReport rep;
  rep.prog = preprocess(p, cfg.invariants);
  if (rep.prog.gts.empty()) {
    rep.stop_reason = "empty";
    rep.wall_secs = elapsed();
    return rep;
  }

  AbstractionInfo abs = abstract_nonprob(rep.prog);
  rep.base = cfg.fixture ? *cfg.fixture : nonprob_pair(abs.prog);
  ExpectedBoundPair ebp = lift(rep.base, rep.prog);

  auto all_finite = [&] {
    for (auto& [g, b] : ebp.rt_e)
      if (b.is_infinite()) return false;
    for (auto& [a, b] : ebp.sz_e)
      if (b.is_infinite()) return false;
    return true;
  };

  std::string reason;
  int iter = 0;
  if (all_finite()) reason = "all_finite";
  while (reason.empty() && iter < cfg.max_rounds) {
    ++iter;
    // Size pass: components are handled in dependency order and improved
    // sizes are visible immediately within the pass.
    bool changed_sz = improve_sizes(rep.prog, rep.base, ebp);
    if (all_finite()) {
      reason = "all_finite";
      break;
    }
    if (expired()) {
      reason = "timeout";
      break;
    }
    // Runtime pass: candidates are evaluated against a frozen snapshot of
    // the expected runtimes and merged at the end of the pass.
    std::map<int, Bound> pending;
    bool changed_rt = false;
    for (auto& g : rep.prog.gts) {
      auto nb = improve_runtime(rep.prog, rep.base, ebp, g.id, cfg.rt_opts);
      if (nb) {
        Bound merged = prefer(ebp.rt_e.at(g.id), *nb);
        if (merged != ebp.rt_e.at(g.id)) {
          pending[g.id] = merged;
          changed_rt = true;
        }
      }
      if (expired()) break;
    }
    for (auto& [gid, b] : pending) ebp.rt_e[gid] = b;
    if (all_finite()) {
      reason = "all_finite";
      break;
    }
    if (expired()) {
      reason = "timeout";
      break;
    }
    if (!changed_sz && !changed_rt) {
      reason = "fixpoint";
      break;
    }
  }
  if (reason.empty()) reason = "max_rounds";

  rep.iterations = iter;
  rep.stop_reason = reason;
  rep.rt_e = std::move(ebp.rt_e);
  rep.sz_e = std::move(ebp.sz_e);
  rep.total = Bound::zero();
  for (auto& g : rep.prog.gts) rep.total = rep.total + rep.rt_e.at(g.id) * g.cost;
  rep.wall_secs = elapsed();
  return rep;
}

inline std::string render_text(const AnalysisReport& rep) {
  std::ostringstream os;
  for (auto& g : rep.prog.gts)
    os << "RT_E(" << g.name() << ") = " << rep.rt_e.at(g.id).str() << "\n";
  for (auto& [a, b] : rep.sz_e)
    os << "S_E" << a.str() << " = " << b.str() << "\n";
  os << "Iterations: " << rep.iterations << " (" << rep.stop_reason << ")\n";
  os << "Total: " << rep.total.str() << "\n";
  os << "Class: " << rep.cls().str() << "\n";
  return os.str();
}

inline std::string render_json(const AnalysisReport& rep) {
  nlohmann::json j;
  j["general_transitions"] = nlohmann::json::array();
  for (auto& g : rep.prog.gts) {
    j["general_transitions"].push_back(
        {{"name", g.name()}, {"rt", rep.rt_e.at(g.id).str()}});
  }
  j["grvs"] = nlohmann::json::array();
  for (auto& [a, b] : rep.sz_e) {
    j["grvs"].push_back({{"gt", "g" + std::to_string(a.gt)},
                         {"location", a.target},
                         {"var", a.var},
                         {"sz", b.str()}});
  }
  j["total"] = rep.total.str();
  j["class"] = rep.cls().str();
  j["iterations"] = rep.iterations;
  return j.dump(2) + "\n";
}

}  // namespace pipbound
