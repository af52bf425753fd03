#pragma once

// Program pruning and simple invariant propagation:
//  1. members with probability 0 are dropped,
//  2. general transitions whose guard has an infeasible rational LP
//     relaxation are removed,
//  3. locations unreachable from the start location are removed,
//  4. optionally, interval invariants are propagated forward over the
//     location graph (widening after 3 unstable joins per location) and the
//     derived single-variable bounds are conjoined into guards.
//
// Ids are renumbered afterwards so that general transition ids and member
// ids stay dense and index-aligned.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pipbound/lp.hpp"
#include "pipbound/pip.hpp"

namespace pipbound {

// Satisfiability of the rational relaxation of the linear guard atoms.
// Nonlinear atoms are ignored, so "unsatisfiable" is decided soundly.
inline bool guard_satisfiable(const Constraint& c) {
  if (c.trivially_false()) return false;
  auto atoms = c.linear_atoms();
  if (atoms.empty()) return true;
  LpProblem lp;
  std::map<Var, int> ids;
  for (auto& a : atoms)
    for (auto& v : a.vars())
      if (!ids.count(v)) ids[v] = lp.add_var(false);
  for (auto& a : atoms) {
    std::map<int, Rational> row;
    for (auto& v : a.vars()) row[ids[v]] = a.coeff_of(v);
    lp.add_row(row, RowOp::Ge, -a.constant_value());
  }
  return lp.solve().has_value();
}

namespace detail {

struct Ival {
  bool has_lo = false, has_hi = false;
  Rational lo{0}, hi{0};
};

inline Ival ival_join(const Ival& a, const Ival& b) {
  Ival r;
  r.has_lo = a.has_lo && b.has_lo;
  if (r.has_lo) r.lo = std::min(a.lo, b.lo);
  r.has_hi = a.has_hi && b.has_hi;
  if (r.has_hi) r.hi = std::max(a.hi, b.hi);
  return r;
}

inline Ival ival_widen(const Ival& old, const Ival& nw) {
  Ival r;
  r.has_lo = old.has_lo && nw.has_lo && nw.lo >= old.lo;
  if (r.has_lo) r.lo = old.lo;
  r.has_hi = old.has_hi && nw.has_hi && nw.hi <= old.hi;
  if (r.has_hi) r.hi = old.hi;
  return r;
}

inline bool ival_leq(const Ival& a, const Ival& b) {
  if (b.has_lo && (!a.has_lo || a.lo < b.lo)) return false;
  if (b.has_hi && (!a.has_hi || a.hi > b.hi)) return false;
  return true;
}

inline Ival ival_add(const Ival& a, const Ival& b) {
  Ival r;
  r.has_lo = a.has_lo && b.has_lo;
  if (r.has_lo) r.lo = a.lo + b.lo;
  r.has_hi = a.has_hi && b.has_hi;
  if (r.has_hi) r.hi = a.hi + b.hi;
  return r;
}

inline Ival ival_scale(const Ival& a, const Rational& q) {
  Ival r;
  if (q == 0) return Ival{true, true, Rational(0), Rational(0)};
  if (q > 0) {
    r.has_lo = a.has_lo;
    if (r.has_lo) r.lo = a.lo * q;
    r.has_hi = a.has_hi;
    if (r.has_hi) r.hi = a.hi * q;
  } else {
    r.has_lo = a.has_hi;
    if (r.has_lo) r.lo = a.hi * q;
    r.has_hi = a.has_lo;
    if (r.has_hi) r.hi = a.lo * q;
  }
  return r;
}

using AbsState = std::map<Var, Ival>;  // program variables only

inline Ival interval_of(const Polynomial& poly, const AbsState& a) {
  if (!poly.is_linear()) return Ival{};
  Ival acc{true, true, poly.constant_value(), poly.constant_value()};
  for (auto& v : poly.vars()) {
    auto it = a.find(v);
    Ival iv = it == a.end() ? Ival{} : it->second;  // temps are unbounded
    acc = ival_add(acc, ival_scale(iv, poly.coeff_of(v)));
  }
  return acc;
}

// Restrict an abstract state by the single-program-variable linear guard
// atoms; nullopt when some interval becomes empty.
inline std::optional<AbsState> clip(const AbsState& a, const Constraint& guard) {
  AbsState r = a;
  for (auto& atom : guard.linear_atoms()) {
    auto vs = atom.vars();
    if (vs.size() != 1) continue;
    const Var& v = *vs.begin();
    if (!r.count(v)) continue;
    Rational c = atom.coeff_of(v), d = atom.constant_value();
    Rational bound = -d / c;
    Ival& iv = r[v];
    if (c > 0) {
      if (!iv.has_lo || iv.lo < bound) iv.has_lo = true, iv.lo = bound;
    } else {
      if (!iv.has_hi || iv.hi > bound) iv.has_hi = true, iv.hi = bound;
    }
    if (iv.has_lo && iv.has_hi && iv.lo > iv.hi) return std::nullopt;
  }
  return r;
}

inline std::map<Location, AbsState> interval_invariants(const PIP& p) {
  std::map<Location, AbsState> states;  // absent location = not yet reached
  AbsState top;
  for (auto& x : p.pvars) top[x] = Ival{};
  states[p.start] = top;
  std::map<Location, int> unstable;

  bool changed = true;
  for (int sweep = 0; changed && sweep < 1000; ++sweep) {
    changed = false;
    for (auto& g : p.gts) {
      auto src = states.find(g.source);
      if (src == states.end()) continue;
      auto clipped = clip(src->second, g.guard);
      if (!clipped) continue;
      for (auto& t : g.members) {
        AbsState post;
        for (auto& x : p.pvars) {
          auto u = t.update.find(x);
          if (u == t.update.end()) {
            post[x] = clipped->at(x);
          } else if (u->second.is_dist) {
            auto sup = u->second.dist.support();
            Ival samp;
            if (sup.has_lo) {
              Ival b = interval_of(sup.lo, *clipped);
              samp.has_lo = b.has_lo;
              samp.lo = b.lo;
            }
            if (sup.has_hi) {
              Ival b = interval_of(sup.hi, *clipped);
              samp.has_hi = b.has_hi;
              samp.hi = b.hi;
            }
            post[x] = ival_add(clipped->at(x), samp);
          } else {
            post[x] = interval_of(u->second.poly, *clipped);
          }
        }
        auto tgt = states.find(t.target);
        if (tgt == states.end()) {
          states[t.target] = post;
          changed = true;
          continue;
        }
        AbsState joined;
        bool grew = false;
        for (auto& x : p.pvars) {
          joined[x] = ival_join(tgt->second.at(x), post[x]);
          if (!ival_leq(joined[x], tgt->second.at(x))) grew = true;
        }
        if (!grew) continue;
        if (++unstable[t.target] > 3)
          for (auto& x : p.pvars) joined[x] = ival_widen(tgt->second.at(x), joined[x]);
        bool still = false;
        for (auto& x : p.pvars)
          if (!ival_leq(joined[x], tgt->second.at(x))) still = true;
        if (still) {
          tgt->second = joined;
          changed = true;
        }
      }
    }
  }
  return states;
}

inline bool atom_present(const Constraint& guard, const Polynomial& atom) {
  for (auto& a : guard.linear_atoms())
    if ((a - atom).is_zero()) return true;
  return false;
}

inline void drop_unreachable(PIP& q) {
  std::set<Location> seen{q.start};
  std::deque<Location> work{q.start};
  while (!work.empty()) {
    Location loc = work.front();
    work.pop_front();
    for (auto& g : q.gts) {
      if (g.source != loc) continue;
      for (auto& t : g.members)
        if (seen.insert(t.target).second) work.push_back(t.target);
    }
  }
  std::erase_if(q.gts, [&](const GeneralTransition& g) { return !seen.count(g.source); });
}

}  // namespace detail

inline PIP preprocess(const PIP& p, bool invariants = true) {
  PIP q = p;
  for (auto& g : q.gts)
    std::erase_if(g.members, [](const Transition& t) { return t.probability == 0; });
  std::erase_if(q.gts, [](const GeneralTransition& g) { return g.members.empty(); });
  std::erase_if(q.gts,
                [](const GeneralTransition& g) { return !guard_satisfiable(g.guard); });
  detail::drop_unreachable(q);

  if (invariants && !q.gts.empty()) {
    auto states = detail::interval_invariants(q);
    for (auto& g : q.gts) {
      auto it = states.find(g.source);
      if (it == states.end()) continue;
      for (auto& [x, iv] : it->second) {
        if (iv.has_lo) {
          Polynomial atom = Polynomial::variable(x) - Polynomial::constant(iv.lo);
          if (!detail::atom_present(g.guard, atom)) g.guard.add_atom(atom);
        }
        if (iv.has_hi) {
          Polynomial atom = Polynomial::constant(iv.hi) - Polynomial::variable(x);
          if (!detail::atom_present(g.guard, atom)) g.guard.add_atom(atom);
        }
      }
    }
    std::erase_if(q.gts,
                  [](const GeneralTransition& g) { return !guard_satisfiable(g.guard); });
    detail::drop_unreachable(q);
  }

  int gid = 0, tid = 0;
  for (auto& g : q.gts) {
    g.id = gid++;
    for (auto& t : g.members) t.id = tid++;
  }
  return q;
}

}  // namespace pipbound
