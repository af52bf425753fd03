#pragma once

// Probabilistic linear ranking functions: per-location linear templates whose
// coefficients are found by an exact LP over a Farkas encoding of the
// Non-Increase / Decrease / Boundedness conditions.
//
// Two modes share the machinery:
//  - Probabilistic: conditions constrain the *expected* next value of the
//    template; boundedness constrains every reachable post-state of the
//    decreasing transition (and of non-singleton non-increasing transitions;
//    a singleton non-decreasing member needs no boundedness condition).
//    The resulting count bound is ceil(r) with no additive correction.
//  - Deterministic: plain linear ranking on a probability-free program;
//    boundedness constrains the pre-state of the decreasing transition, so
//    the count bound is ceil(r) + 1.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pipbound/farkas.hpp"
#include "pipbound/graph.hpp"
#include "pipbound/lp.hpp"
#include "pipbound/pip.hpp"
#include "pipbound/rng.hpp"

namespace pipbound {

enum class RankMode { Probabilistic, Deterministic };

struct PLRF {
  std::map<Location, Polynomial> r;  // locations absent from the map rank as 0
  std::set<int> gt_decr, gt_ni;
  RankMode mode = RankMode::Probabilistic;

  Polynomial at(const Location& l) const {
    auto it = r.find(l);
    return it == r.end() ? Polynomial() : it->second;
  }
};

// Per-variable expected update of a member: polynomial updates map to
// themselves, distribution updates to x + E(d).
inline std::map<Var, Polynomial> expectation_update(const Transition& t) {
  std::map<Var, Polynomial> m;
  for (auto& [x, u] : t.update)
    m[x] = u.is_dist ? Polynomial::variable(x) + u.dist.expected() : u.poly;
  return m;
}

// The polynomial whose value at state s is the expected value of r after one
// execution of g from s.
inline Polynomial expected_post(const std::map<Location, Polynomial>& r,
                                const GeneralTransition& g) {
  Polynomial sum;
  for (auto& t : g.members) {
    auto it = r.find(t.target);
    Polynomial rt = it == r.end() ? Polynomial() : it->second;
    sum = sum + rt.substitute(expectation_update(t)) * t.probability;
  }
  return sum;
}

namespace detail {

struct Template {
  std::map<Var, int> coeff;  // pvar -> LP unknown
  int cst = -1;
};

class PlrfBuilder {
 public:
  PlrfBuilder(const PIP& p, const std::set<int>& gt_decr, const std::set<int>& gt_ni,
              RankMode mode)
      : p_(p), gt_decr_(gt_decr), gt_ni_(gt_ni), mode_(mode) {}

  std::optional<PLRF> build() {
    collect_templates();
    for (int gid : gt_ni_) {
      const GeneralTransition& g = p_.gts.at(gid);
      add_drift_row(g, gt_decr_.count(gid) > 0);
    }
    for (int gid : gt_ni_) add_boundedness_rows(p_.gts.at(gid), gid);
    auto sol = lp_.minimize_l1(all_unknowns_);
    if (!sol) return std::nullopt;
    PLRF out;
    out.gt_decr = gt_decr_;
    out.gt_ni = gt_ni_;
    out.mode = mode_;
    for (auto& [loc, tpl] : tpl_) {
      Polynomial r = Polynomial::constant((*sol)[tpl.cst]);
      for (auto& [x, id] : tpl.coeff) r = r + Polynomial::variable(x) * (*sol)[id];
      out.r[loc] = r;
    }
    return out;
  }

 private:
  const PIP& p_;
  std::set<int> gt_decr_, gt_ni_;
  RankMode mode_;
  LpProblem lp_;
  std::map<Location, Template> tpl_;
  std::vector<int> all_unknowns_;
  std::set<int> zeroed_;

  void collect_templates() {
    std::set<Location> locs;
    for (int gid : gt_ni_) {
      const GeneralTransition& g = p_.gts.at(gid);
      locs.insert(g.source);
      for (auto& t : g.members) locs.insert(t.target);
    }
    for (auto& loc : locs) {
      Template t;
      for (auto& x : p_.pvars) {
        t.coeff[x] = lp_.add_var(false);
        all_unknowns_.push_back(t.coeff[x]);
      }
      t.cst = lp_.add_var(false);
      all_unknowns_.push_back(t.cst);
      tpl_[loc] = t;
    }
  }

  SymPoly sym_rank(const Location& loc) const {
    SymPoly s;
    auto it = tpl_.find(loc);
    if (it == tpl_.end()) return s;  // fixed to 0 outside the template
    for (auto& [x, id] : it->second.coeff)
      s.coeff[x] = SymLin::of_var(id);
    s.cst = SymLin::of_var(it->second.cst);
    return s;
  }

  void force_zero(int id) {
    if (!zeroed_.insert(id).second) return;
    lp_.add_row({{id, Rational(1)}}, RowOp::Eq, Rational(0));
  }

  // r(target) composed with the member's expected update; coefficients that
  // would multiply a nonlinear update are pinned to 0 to stay linear.
  SymPoly sym_expected_post(const Transition& t) {
    SymPoly acc;
    auto it = tpl_.find(t.target);
    if (it == tpl_.end()) return acc;
    acc.cst = SymLin::of_var(it->second.cst);
    auto upd = expectation_update(t);
    for (auto& [x, id] : it->second.coeff) {
      auto u = upd.find(x);
      Polynomial e = u == upd.end() ? Polynomial::variable(x) : u->second;
      if (!e.is_linear()) {
        force_zero(id);
        continue;
      }
      acc.add_scaled(SymLin::of_var(id), e);
    }
    return acc;
  }

  // Premise: the linear guard atoms (nonlinear atoms are dropped, which only
  // strengthens the obligation).
  std::vector<Polynomial> guard_premise(const GeneralTransition& g) const {
    return g.guard.linear_atoms();
  }

  void add_drift_row(const GeneralTransition& g, bool decreasing) {
    SymPoly exp;
    for (auto& t : g.members) exp = exp + sym_expected_post(t).scaled(t.probability);
    SymPoly conc = sym_rank(g.source) - exp;
    if (decreasing) conc.shift(Rational(-1));
    add_farkas_rows(lp_, guard_premise(g), conc);
  }

  void add_boundedness_rows(const GeneralTransition& g, int gid) {
    if (mode_ == RankMode::Deterministic) {
      if (gt_decr_.count(gid)) add_farkas_rows(lp_, guard_premise(g), sym_rank(g.source));
      return;
    }
    if (!gt_decr_.count(gid) && g.members.size() == 1) return;
    for (auto& t : g.members) {
      std::vector<Polynomial> premise = guard_premise(g);
      SymPoly acc;
      auto it = tpl_.find(t.target);
      if (it == tpl_.end()) continue;  // r(target) fixed to 0: trivially >= 0
      acc.cst = SymLin::of_var(it->second.cst);
      for (auto& [x, id] : it->second.coeff) {
        Polynomial e = Polynomial::variable(x);
        auto u = t.update.find(x);
        if (u != t.update.end()) {
          if (u->second.is_dist) {
            Var fresh = "d$" + x;
            e = Polynomial::variable(x) + Polynomial::variable(fresh);
            auto sup = u->second.dist.support();
            if (sup.has_lo && sup.lo.is_linear())
              premise.push_back(Polynomial::variable(fresh) - sup.lo);
            if (sup.has_hi && sup.hi.is_linear())
              premise.push_back(sup.hi - Polynomial::variable(fresh));
          } else {
            e = u->second.poly;
          }
        }
        if (!e.is_linear()) {
          force_zero(id);
          continue;
        }
        acc.add_scaled(SymLin::of_var(id), e);
      }
      add_farkas_rows(lp_, premise, acc);
    }
  }
};

}  // namespace detail

inline std::optional<PLRF> synthesize_plrf(const PIP& p, const std::set<int>& gt_decr,
                                           const std::set<int>& gt_ni, RankMode mode) {
  if (gt_decr.empty()) return std::nullopt;
  for (int gid : gt_decr)
    if (!gt_ni.count(gid)) return std::nullopt;
  detail::PlrfBuilder b(p, gt_decr, gt_ni, mode);
  return b.build();
}

// Candidate non-increasing sets for improving g: first the general
// transitions confined to g's location-graph SCC, then {g} alone.
inline std::vector<std::set<int>> candidate_gtni(const PIP& p, int gid) {
  std::vector<Location> locs = p.locations();
  std::map<Location, int> idx;
  for (size_t i = 0; i < locs.size(); ++i) idx[locs[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(locs.size());
  for (auto& g : p.gts)
    for (auto& t : g.members) adj[idx[g.source]].push_back(idx[t.target]);
  auto scc = tarjan_scc(adj);
  int comp = scc.component_of[idx[p.gts.at(gid).source]];

  std::set<int> cycle;
  for (auto& g : p.gts) {
    if (scc.component_of[idx[g.source]] != comp) continue;
    bool inside = true;
    for (auto& t : g.members)
      if (scc.component_of[idx[t.target]] != comp) inside = false;
    if (inside) cycle.insert(g.id);
  }
  cycle.insert(gid);
  std::vector<std::set<int>> out{cycle};
  if (cycle != std::set<int>{gid}) out.push_back({gid});
  return out;
}

// Independent re-check of a PLRF: drift conditions via a fresh Farkas
// feasibility query where possible, boundedness by pushing sampled
// guard-satisfying states through the member updates.
inline std::optional<std::string> verify_plrf(const PIP& p, const PLRF& rf, int samples,
                                              Rng& rng) {
  auto entails = [&](const std::vector<Polynomial>& premise, const Polynomial& conc) {
    LpProblem lp;
    SymPoly c;
    for (auto& v : conc.vars()) c.coeff[v] = SymLin::of_const(conc.coeff_of(v));
    c.cst = SymLin::of_const(conc.constant_value());
    add_farkas_rows(lp, premise, c);
    return lp.solve().has_value();
  };

  // Symbolic Non-Increase / Decrease.
  for (int gid : rf.gt_ni) {
    const GeneralTransition& g = p.gts.at(gid);
    Polynomial conc = rf.at(g.source) - expected_post(rf.r, g);
    if (rf.gt_decr.count(gid)) conc = conc - Polynomial::constant(Rational(1));
    if (!conc.is_linear()) return g.name() + ": nonlinear drift obligation";
    if (!entails(g.guard.linear_atoms(), conc))
      return g.name() + ": " + (rf.gt_decr.count(gid) ? "Decrease" : "Non-Increase") +
             " violated";
  }

  // Sampled Boundedness.
  for (int gid : rf.gt_ni) {
    const GeneralTransition& g = p.gts.at(gid);
    bool decr = rf.gt_decr.count(gid) > 0;
    if (rf.mode == RankMode::Deterministic && !decr) continue;
    if (rf.mode == RankMode::Probabilistic && !decr && g.members.size() == 1) continue;

    std::set<Var> svars(p.pvars.begin(), p.pvars.end());
    for (auto& v : g.guard.vars()) svars.insert(v);
    for (auto& t : g.members)
      for (auto& [x, u] : t.update)
        if (!u.is_dist)
          for (auto& v : u.poly.vars()) svars.insert(v);

    int found = 0;
    for (int it = 0; it < samples * 50 && found < samples; ++it) {
      State s;
      for (auto& v : svars) s[v] = static_cast<long long>(rng.uniform_int(-10, 10));
      if (!g.guard.satisfied_by(s)) continue;
      ++found;
      if (rf.mode == RankMode::Deterministic) {
        std::map<Var, Rational> rs;
        for (auto& [v, val] : s) rs[v] = Rational(val);
        if (rf.at(g.source).eval(rs) < 0)
          return g.name() + ": pre-state Boundedness violated";
        continue;
      }
      for (auto& t : g.members) {
        std::map<Var, Rational> post;
        for (auto& [v, val] : s) post[v] = Rational(val);
        for (auto& [x, u] : t.update)
          post[x] = u.is_dist ? Rational(s.at(x)) + Rational(u.dist.sample(rng, s))
                              : [&] {
                                  std::map<Var, Rational> rs;
                                  for (auto& [v, val] : s) rs[v] = Rational(val);
                                  return u.poly.eval(rs);
                                }();
        if (rf.at(t.target).eval(post) < 0)
          return t.name() + ": post-state Boundedness violated";
      }
    }
  }
  return std::nullopt;
}

}  // namespace pipbound
