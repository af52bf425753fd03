#pragma once

// Expected size bounds for general result variables.
//
// A general result variable (g, l, x) tracks the value of program variable x
// whenever general transition g reaches location l.  Bounds are improved by
// walking the strongly connected components of a dependency graph between
// result variables: trivial components get a local-change bound composed with
// the sizes of incoming transitions, while cycles are unrolled by multiplying
// the per-visit change with the expected number of visits.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bound.hpp"
#include "exprt.hpp"
#include "graph.hpp"
#include "nonprob.hpp"
#include "pip.hpp"

namespace pipbound {

// Expected magnitude of the change applied to a.var by one execution of a.gt
// arriving at a.target: the probability-weighted sum over the members that
// reach a.target of |new - old|, with distribution updates contributing the
// expected magnitude of the sampled summand and temporaries replaced by
// guard-derived magnitude bounds.
inline Bound expected_change_bound(const PIP& p, const Grv& a) {
  const GeneralTransition& g = p.gts.at(a.gt);
  Bound sum = Bound::zero();
  for (const Transition& t : g.members) {
    if (t.target != a.target) continue;
    Bound ch = Bound::zero();
    auto it = t.update.find(a.var);
    if (it != t.update.end()) {
      if (it->second.is_dist) {
        ch = it->second.dist.abs_bound();
      } else {
        ch = detail::maxtv(p, g, it->second.poly - Polynomial::variable(a.var));
      }
    }
    sum = sum + ch * t.probability;
  }
  return sum;
}

// When every member of a.gt reaching a.target overwrites a.var with a
// polynomial that does not read a.var, the new value is independent of the
// old one.  Returns the probability-weighted magnitude bound of the assigned
// values in that case, and nullopt otherwise.
inline std::optional<Bound> fresh_value_bound(const PIP& p, const Grv& a) {
  const GeneralTransition& g = p.gts.at(a.gt);
  Bound sum = Bound::zero();
  bool any = false;
  for (const Transition& t : g.members) {
    if (t.target != a.target) continue;
    any = true;
    auto it = t.update.find(a.var);
    if (it == t.update.end() || it->second.is_dist ||
        it->second.poly.mentions(a.var)) {
      return std::nullopt;
    }
    sum = sum + detail::maxtv(p, g, it->second.poly) * t.probability;
  }
  if (!any) return std::nullopt;
  return sum;
}

// Dependency graph between general result variables.  There is an edge from
// b to a when b's transition can immediately precede a's (b targets the
// source of a.gt) and b's variable occurs in the bound describing a's new
// value.
struct GrvGraph {
  std::vector<Grv> nodes;
  std::map<Grv, int> id;
  std::vector<std::vector<int>> succs;
  std::vector<std::vector<int>> preds;
  std::vector<Bound> change;                       // expected change per node
  std::vector<std::optional<Bound>> fresh;         // overwrite bound per node
  SccResult scc;
};

inline GrvGraph build_grv_graph(const PIP& p) {
  GrvGraph gg;
  gg.nodes = p.grvs();
  for (int i = 0; i < static_cast<int>(gg.nodes.size()); ++i) {
    gg.id[gg.nodes[i]] = i;
  }
  gg.succs.assign(gg.nodes.size(), {});
  gg.preds.assign(gg.nodes.size(), {});
  gg.change.reserve(gg.nodes.size());
  gg.fresh.reserve(gg.nodes.size());
  for (const Grv& a : gg.nodes) {
    gg.change.push_back(expected_change_bound(p, a));
    gg.fresh.push_back(fresh_value_bound(p, a));
  }
  for (int i = 0; i < static_cast<int>(gg.nodes.size()); ++i) {
    const Grv& a = gg.nodes[i];
    const Location& src = p.gts.at(a.gt).source;
    // Variables whose pre-transition sizes influence a's new value.
    std::set<Var> active;
    if (gg.fresh[i]) {
      for (const Var& v : gg.fresh[i]->vars()) {
        if (p.is_pvar(v)) active.insert(v);
      }
    } else {
      active.insert(a.var);
      for (const Var& v : gg.change[i].vars()) {
        if (p.is_pvar(v)) active.insert(v);
      }
    }
    for (int h : p.pre_gts(a.gt)) {
      for (const Var& v : active) {
        auto it = gg.id.find(Grv{h, src, v});
        if (it != gg.id.end()) {
          gg.succs[it->second].push_back(i);
          gg.preds[i].push_back(it->second);
        }
      }
    }
  }
  gg.scc = tarjan_scc(gg.succs);
  return gg;
}

namespace detail {

// Substitution mapping each program variable v to the sum of expected size
// bounds of v over the pre-transitions of gt.
inline Bound subst_expected_sizes(const PIP& p, const ExpectedBoundPair& ebp,
                                  int gt, const Bound& b) {
  const Location& src = p.gts.at(gt).source;
  std::map<Var, Bound> sub;
  for (const Var& v : b.vars()) {
    if (!p.is_pvar(v)) continue;
    Bound s = Bound::zero();
    for (int h : p.pre_gts(gt)) {
      s = s + ebp.sz_e.at(Grv{h, src, v});
    }
    sub[v] = s;
  }
  return sub.empty() ? b : b.substitute(sub);
}

// Substitution mapping each program variable v to the sum of
// non-probabilistic size bounds of v over the individual pre-members of gt.
// Safe to push into non-concave bounds, unlike expected sizes.
inline Bound subst_nonprob_sizes(const PIP& p, const BoundPair& bp, int gt,
                                 const Bound& b) {
  const Location& src = p.gts.at(gt).source;
  std::map<Var, Bound> sub;
  for (const Var& v : b.vars()) {
    if (!p.is_pvar(v)) continue;
    Bound s = Bound::zero();
    for (int h : p.pre_gts(gt)) {
      for (const Transition& t : p.gts.at(h).members) {
        if (t.target != src) continue;
        s = s + bp.sz.at({t.id, v});
      }
    }
    sub[v] = s;
  }
  return sub.empty() ? b : b.substitute(sub);
}

}  // namespace detail

// One sweep over the result-variable dependency graph in topological order,
// tightening ebp.sz_e in place.  Returns true when some bound improved.
inline bool improve_sizes(const PIP& p, const BoundPair& bp,
                          ExpectedBoundPair& ebp) {
  GrvGraph gg = build_grv_graph(p);
  bool changed = false;

  auto merge = [&](const Grv& a, const Bound& candidate) {
    Bound& cur = ebp.sz_e.at(a);
    Bound merged = prefer(cur, candidate);
    if (merged != cur) {
      cur = merged;
      changed = true;
    }
  };

  for (const std::vector<int>& comp : gg.scc.components) {
    if (scc_is_trivial(gg.succs, comp)) {
      int i = comp.front();
      const Grv& a = gg.nodes[i];
      bool initial = p.pre_gts(a.gt).empty();
      Bound nb;
      if (gg.fresh[i]) {
        const Bound& fv = *gg.fresh[i];
        if (initial) {
          nb = fv;
        } else if (fv.is_linear()) {
          nb = detail::subst_expected_sizes(p, ebp, a.gt, fv);
        } else {
          nb = detail::subst_nonprob_sizes(p, bp, a.gt, fv);
        }
      } else {
        Bound local = Bound::variable(a.var) + gg.change[i];
        if (initial) {
          nb = local;
        } else if (gg.change[i].is_linear()) {
          // Linear (hence concave) bounds may be composed with expected
          // sizes directly.
          nb = detail::subst_expected_sizes(p, ebp, a.gt, local);
        } else {
          // Non-concave change: compose the change with worst-case sizes and
          // only the carried value with expected sizes.
          nb = detail::subst_expected_sizes(p, ebp, a.gt,
                                            Bound::variable(a.var)) +
               detail::subst_nonprob_sizes(p, bp, a.gt, gg.change[i]);
        }
      }
      merge(a, nb);
      continue;
    }

    // Cycle: every visit of a member transition may add its local change, so
    // multiply per-transition changes with expected visit counts and add the
    // sizes flowing in from outside the component.
    std::set<int> in_comp(comp.begin(), comp.end());
    std::set<Var> comp_vars;
    std::set<int> comp_gts;
    for (int i : comp) {
      comp_vars.insert(gg.nodes[i].var);
      comp_gts.insert(gg.nodes[i].gt);
    }
    for (const Var& x : comp_vars) {
      std::set<int> entry_nodes;
      for (int i : comp) {
        for (int pr : gg.preds[i]) {
          if (!in_comp.count(pr) && gg.nodes[pr].var == x) {
            entry_nodes.insert(pr);
          }
        }
      }
      Bound total = Bound::zero();
      for (int e : entry_nodes) {
        total = total + ebp.sz_e.at(gg.nodes[e]);
      }
      for (int g : comp_gts) {
        Bound per_visit = Bound::zero();
        for (int i : comp) {
          const Grv& a = gg.nodes[i];
          if (a.gt != g || a.var != x) continue;
          per_visit =
              per_visit + detail::subst_nonprob_sizes(p, bp, g, gg.change[i]);
        }
        total = total + ebp.rt_e.at(g) * per_visit;
      }
      for (int i : comp) {
        if (gg.nodes[i].var == x) merge(gg.nodes[i], total);
      }
    }
  }
  return changed;
}

}  // namespace pipbound
