#pragma once

// Monte-Carlo execution of probabilistic integer programs.  Used as a
// soundness oracle: observed mean transition counts and observed variable
// magnitudes must stay below the statically inferred expected bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "pip.hpp"
#include "rng.hpp"

namespace pipbound {

enum class SchedulerKind { FirstEnabled, RandomEnabled, Scripted };

// Resolution policy for the demonic choices (which enabled general
// transition fires, and which values temporary variables take).
//   FirstEnabled: lowest transition id; lexicographically smallest
//     guard-satisfying temporary assignment within [-temp_box, temp_box].
//   RandomEnabled: uniform among enabled transitions; uniform among
//     guard-satisfying temporary assignments within the box.
//   Scripted: follow `script` (one general transition id per step) while it
//     lasts and is enabled, otherwise fall back to FirstEnabled.
struct Scheduler {
  SchedulerKind kind = SchedulerKind::FirstEnabled;
  long long temp_box = 16;
  std::vector<int> script;
};

// One configuration of a run: current location, the member transition that
// produced it (-1 initially) and the variable valuation.
struct Config {
  Location loc;
  int last_member = -1;
  State state;
  bool terminal = false;
};

struct SimStats {
  long long trials = 0;
  long long completed = 0;  // terminated before the step cap without fault
  long long cap_hits = 0;
  long long faults = 0;
  double termination_fraction = 0;
  std::map<int, double> count_mean, count_se;    // per general transition
  std::map<Grv, double> size_mean, size_se;      // per result variable, max |x|
  double cost_mean = 0, cost_se = 0;
};

namespace detail {

// All assignments of the listed temporaries within the box that satisfy the
// guard under state s, in lexicographic order.
inline void satisfying_assignments(const Constraint& guard, const State& s,
                                   const std::vector<Var>& temps,
                                   long long box,
                                   std::vector<State>& out) {
  State cur = s;
  std::vector<long long> vals(temps.size(), -box);
  auto record_if_sat = [&] {
    for (size_t i = 0; i < temps.size(); ++i) cur[temps[i]] = vals[i];
    if (guard.satisfied_by(cur)) out.push_back(cur);
  };
  if (temps.empty()) {
    if (guard.satisfied_by(cur)) out.push_back(cur);
    return;
  }
  while (true) {
    record_if_sat();
    size_t i = temps.size();
    while (i > 0 && vals[i - 1] == box) {
      vals[i - 1] = -box;
      --i;
    }
    if (i == 0) break;
    ++vals[i - 1];
  }
}

// Temporaries a general transition consults: variables of its guard and of
// its members' update expressions that are not program variables.
inline std::vector<Var> gt_temps(const PIP& p, const GeneralTransition& g) {
  std::set<Var> seen;
  for (const Var& v : g.guard.vars())
    if (!p.is_pvar(v)) seen.insert(v);
  for (const Transition& t : g.members) {
    for (auto& [x, rhs] : t.update) {
      if (rhs.is_dist) {
        for (const Var& v : rhs.dist.vars())
          if (!p.is_pvar(v)) seen.insert(v);
      } else {
        for (const Var& v : rhs.poly.vars())
          if (!p.is_pvar(v)) seen.insert(v);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

// Picks a member index according to the member probabilities, consuming one
// 64-bit draw.  Comparison against cumulative thresholds is exact.
inline size_t pick_member(Rng& rng, const std::vector<Transition>& members) {
  uint64_t r = rng.next();
  Int two64 = Int(1) << 64;
  Rational cum(0);
  for (size_t i = 0; i + 1 < members.size(); ++i) {
    cum += members[i].probability;
    Int threshold = (rat_num(cum) * two64) / rat_den(cum);
    if (Int(r) < threshold) return i;
  }
  return members.size() - 1;
}

}  // namespace detail

// Executes one step from cfg.  Returns the successor configuration; if no
// general transition is enabled the result is terminal.  Throws SimFault on
// invalid distribution parameters or non-integer update results.
inline Config step(const PIP& p, const Config& cfg, const Scheduler& sch,
                   Rng& rng, int step_index = 0) {
  // Collect enabled transitions with a witness temporary assignment.
  struct Enabled {
    int gid;
    State state;  // program state extended with chosen temporaries
  };
  std::vector<Enabled> enabled;
  for (const GeneralTransition& g : p.gts) {
    if (g.source != cfg.loc) continue;
    std::vector<Var> temps = detail::gt_temps(p, g);
    std::vector<State> sat;
    detail::satisfying_assignments(g.guard, cfg.state, temps, sch.temp_box,
                                   sat);
    if (sat.empty()) continue;
    State chosen;
    if (sch.kind == SchedulerKind::RandomEnabled) {
      chosen = sat[static_cast<size_t>(rng.below(sat.size()))];
    } else {
      chosen = sat.front();  // lexicographically smallest
    }
    enabled.push_back({g.id, std::move(chosen)});
  }
  if (enabled.empty()) {
    Config out = cfg;
    out.terminal = true;
    return out;
  }

  size_t pick = 0;
  switch (sch.kind) {
    case SchedulerKind::FirstEnabled:
      pick = 0;
      break;
    case SchedulerKind::RandomEnabled:
      pick = static_cast<size_t>(rng.below(enabled.size()));
      break;
    case SchedulerKind::Scripted: {
      pick = 0;
      if (step_index < static_cast<int>(sch.script.size())) {
        int want = sch.script[step_index];
        for (size_t i = 0; i < enabled.size(); ++i)
          if (enabled[i].gid == want) pick = i;
      }
      break;
    }
  }

  const GeneralTransition& g = p.gts.at(enabled[pick].gid);
  const State& pre = enabled[pick].state;
  const Transition& t = g.members[detail::pick_member(rng, g.members)];

  Config out;
  out.loc = t.target;
  out.last_member = t.id;
  for (const Var& x : p.pvars) {
    auto it = t.update.find(x);
    if (it == t.update.end()) {
      out.state[x] = cfg.state.count(x) ? cfg.state.at(x) : 0;
      continue;
    }
    if (it->second.is_dist) {
      long long base = cfg.state.count(x) ? cfg.state.at(x) : 0;
      out.state[x] = base + it->second.dist.sample(rng, pre);
    } else {
      Rational v = it->second.poly.eval_state(pre);
      if (!rat_is_integer(v)) {
        throw SimFault("non-integer update for " + x);
      }
      out.state[x] = static_cast<long long>(rat_num(v));
    }
  }
  return out;
}

// Runs `trials` independent executions from initial state s0 (missing
// program variables default to 0) and aggregates per-transition counts and
// per-result-variable maximal magnitudes.  Trials that hit the step cap or
// fault are counted but excluded from the means.
inline SimStats estimate(const PIP& p, const State& s0, const Scheduler& sch,
                         long long trials, long long step_cap = 100000,
                         uint64_t seed = 0) {
  SimStats st;
  st.trials = trials;

  std::vector<Grv> grvs = p.grvs();
  std::map<int, double> cnt_sum, cnt_sumsq;
  std::map<Grv, double> sz_sum, sz_sumsq;
  double cost_sum = 0, cost_sumsq = 0;
  for (auto& g : p.gts) cnt_sum[g.id] = cnt_sumsq[g.id] = 0;
  for (auto& a : grvs) sz_sum[a] = sz_sumsq[a] = 0;

  State init;
  for (const Var& x : p.pvars) init[x] = s0.count(x) ? s0.at(x) : 0;

  for (long long trial = 0; trial < trials; ++trial) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(trial)));
    Config cfg;
    cfg.loc = p.start;
    cfg.state = init;

    std::map<int, long long> counts;
    std::map<Grv, long long> maxes;
    double cost = 0;
    bool capped = false, faulted = false;
    for (long long s = 0;; ++s) {
      if (s >= step_cap) {
        capped = true;
        break;
      }
      Config nxt;
      try {
        nxt = step(p, cfg, sch, rng, static_cast<int>(s));
      } catch (const SimFault&) {
        faulted = true;
        break;
      }
      if (nxt.terminal) break;
      const GeneralTransition& g = *p.gt_of_member(nxt.last_member);
      counts[g.id] += 1;
      cost += rat_double(g.cost);
      for (const Var& x : p.pvars) {
        long long mag = std::llabs(nxt.state.at(x));
        Grv a{g.id, nxt.loc, x};
        auto it = maxes.find(a);
        if (it == maxes.end() || it->second < mag) maxes[a] = mag;
      }
      cfg = std::move(nxt);
    }

    if (capped) {
      st.cap_hits += 1;
      continue;
    }
    if (faulted) {
      st.faults += 1;
      continue;
    }
    st.completed += 1;
    for (auto& g : p.gts) {
      double c = static_cast<double>(counts.count(g.id) ? counts.at(g.id) : 0);
      cnt_sum[g.id] += c;
      cnt_sumsq[g.id] += c * c;
    }
    for (auto& a : grvs) {
      double m = static_cast<double>(maxes.count(a) ? maxes.at(a) : 0);
      sz_sum[a] += m;
      sz_sumsq[a] += m * m;
    }
    cost_sum += cost;
    cost_sumsq += cost * cost;
  }

  st.termination_fraction =
      trials > 0 ? static_cast<double>(st.completed) / static_cast<double>(trials)
                 : 0.0;
  auto finish = [&](double sum, double sumsq, double& mean, double& se) {
    long long n = st.completed;
    if (n == 0) {
      mean = se = 0;
      return;
    }
    mean = sum / static_cast<double>(n);
    double var = sumsq / static_cast<double>(n) - mean * mean;
    if (var < 0) var = 0;
    if (n > 1) var = var * static_cast<double>(n) / static_cast<double>(n - 1);
    se = std::sqrt(var / static_cast<double>(n));
  };
  for (auto& g : p.gts) {
    double m, e;
    finish(cnt_sum[g.id], cnt_sumsq[g.id], m, e);
    st.count_mean[g.id] = m;
    st.count_se[g.id] = e;
  }
  for (auto& a : grvs) {
    double m, e;
    finish(sz_sum[a], sz_sumsq[a], m, e);
    st.size_mean[a] = m;
    st.size_se[a] = e;
  }
  finish(cost_sum, cost_sumsq, st.cost_mean, st.cost_se);
  return st;
}

}  // namespace pipbound
