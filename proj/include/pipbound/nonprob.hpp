#pragma once

// Non-probabilistic bound pair for the abstracted (probability-free) program:
//  - rt: per-member execution-count bounds from deterministic linear ranking
//    functions (count = ceil(rank at entry) + 1 per entry),
//  - sz: per-member absolute-value size bounds from a result-variable graph
//    whose SCCs are solved in topological order.
//
// Bounds only ever shrink under prefer; the alternation of size and runtime
// passes is capped at 2·|general transitions| rounds.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pipbound/bound.hpp"
#include "pipbound/graph.hpp"
#include "pipbound/pip.hpp"
#include "pipbound/ranking.hpp"

namespace pipbound {

struct BoundPair {
  std::map<int, Bound> rt;                  // member transition id -> count bound
  std::map<std::pair<int, Var>, Bound> sz;  // (member id, variable) -> size bound
};

namespace detail {

// Bound on |u| for a temporary u: from guard atoms that sandwich u between
// two program-variable polynomials, else unbounded.
inline Bound temp_abs_bound(const PIP& p, const Constraint& guard, const Var& u) {
  std::optional<Polynomial> up, lo;
  for (auto& a : guard.linear_atoms()) {
    Rational c = a.coeff_of(u);
    if (c == 0) continue;
    Polynomial rest = a - Polynomial::variable(u) * c;
    bool clean = true;
    for (auto& v : rest.vars())
      if (!p.is_pvar(v)) clean = false;
    if (!clean) continue;
    if (c < 0 && !up) up = rest * (Rational(1) / -c);
    if (c > 0 && !lo) lo = rest * (Rational(-1) / c);
  }
  if (!up || !lo) return Bound::infinity();
  return overapprox(*up) + overapprox(*lo);
}

// ceil-overapproximation with temporaries replaced by their largest
// guard-derived absolute value.
inline Bound maxtv(const PIP& p, const GeneralTransition& g, const Polynomial& poly) {
  Bound b = overapprox(poly);
  std::map<Var, Bound> sub;
  for (auto& v : b.vars())
    if (!p.is_pvar(v)) sub[v] = temp_abs_bound(p, g.guard, v);
  return sub.empty() ? b : b.substitute(sub);
}

// One size-analysis pass over the result-variable graph of the abstracted
// program (every general transition is a singleton).
class DetSizePass {
 public:
  DetSizePass(const PIP& pa, const std::map<int, Bound>& rt_gt,
              const std::map<std::pair<int, Var>, Bound>& prev)
      : pa_(pa), rt_(rt_gt), prev_(prev) {}

  std::map<std::pair<int, Var>, Bound> run() {
    build_nodes();
    build_edges();
    auto scc = tarjan_scc(adj_);
    for (auto& comp : scc.components) {
      if (scc_is_trivial(adj_, comp))
        solve_trivial(comp.front());
      else
        solve_cycle(comp);
    }
    std::map<std::pair<int, Var>, Bound> out;
    for (size_t i = 0; i < nodes_.size(); ++i)
      out[{nodes_[i].gt, nodes_[i].x}] = value(static_cast<int>(i));
    return out;
  }

 private:
  struct Node {
    int gt;
    Var x;
    Bound ch = Bound::zero();         // maxTV(ceil(update - x))
    bool abs_update = false;          // update does not mention x
    Bound local_abs = Bound::zero();  // maxTV(ceil(update)) when abs_update
    std::set<Var> actv;               // program variables feeding this node
  };

  const PIP& pa_;
  const std::map<int, Bound>& rt_;
  const std::map<std::pair<int, Var>, Bound>& prev_;
  std::vector<Node> nodes_;
  std::map<std::pair<int, Var>, int> node_id_;
  std::vector<std::vector<int>> adj_, preds_;
  std::map<int, std::vector<int>> pre_;
  std::map<int, Bound> fresh_;

  Bound value(int id) const {
    auto f = fresh_.find(id);
    if (f != fresh_.end()) return f->second;
    auto p = prev_.find({nodes_[id].gt, nodes_[id].x});
    return p != prev_.end() ? p->second : Bound::infinity();
  }

  void build_nodes() {
    for (auto& g : pa_.gts) {
      const Transition& t = g.members.front();
      for (auto& x : pa_.pvars) {
        Node n;
        n.gt = g.id;
        n.x = x;
        auto u = t.update.find(x);
        if (u != t.update.end()) {
          const Polynomial& eta = u->second.poly;
          n.ch = maxtv(pa_, g, eta - Polynomial::variable(x));
          n.abs_update = !eta.mentions(x);
          if (n.abs_update) n.local_abs = maxtv(pa_, g, eta);
        }
        if (n.abs_update) {
          for (auto& v : n.local_abs.vars())
            if (pa_.is_pvar(v)) n.actv.insert(v);
        } else {
          n.actv.insert(x);
          for (auto& v : n.ch.vars())
            if (pa_.is_pvar(v)) n.actv.insert(v);
        }
        node_id_[{g.id, x}] = static_cast<int>(nodes_.size());
        nodes_.push_back(std::move(n));
      }
    }
  }

  void build_edges() {
    adj_.assign(nodes_.size(), {});
    preds_.assign(nodes_.size(), {});
    for (auto& g : pa_.gts) pre_[g.id] = pa_.pre_gts(g.id);
    for (size_t a = 0; a < nodes_.size(); ++a) {
      for (int h : pre_[nodes_[a].gt]) {
        for (auto& xp : nodes_[a].actv) {
          int b = node_id_.at({h, xp});
          adj_[b].push_back(static_cast<int>(a));
          preds_[a].push_back(b);
        }
      }
    }
  }

  // Substitute every program variable of b by the summed sizes of the
  // node's pre-transitions.
  Bound inc(int gt, const Bound& b) const {
    std::map<Var, Bound> sub;
    for (auto& v : b.vars()) {
      Bound s = Bound::zero();
      for (int h : pre_.at(gt)) s = s + value(node_id_.at({h, v}));
      sub[v] = s;
    }
    return sub.empty() ? b : b.substitute(sub);
  }

  void solve_trivial(int id) {
    const Node& n = nodes_[id];
    bool initial = pre_.at(n.gt).empty();
    Bound res;
    if (n.abs_update)
      res = initial ? n.local_abs : inc(n.gt, n.local_abs);
    else if (initial)
      res = Bound::variable(n.x) + n.ch;
    else
      res = inc(n.gt, Bound::variable(n.x) + n.ch);
    fresh_[id] = res;
  }

  void solve_cycle(const std::vector<int>& comp) {
    std::set<int> in_comp(comp.begin(), comp.end());
    std::set<Var> vars;
    std::set<int> gts;
    for (int id : comp) {
      vars.insert(nodes_[id].x);
      gts.insert(nodes_[id].gt);
    }
    for (auto& x : vars) {
      std::set<int> betas;
      for (int id : comp)
        for (int b : preds_[id])
          if (!in_comp.count(b) && nodes_[b].x == x) betas.insert(b);
      Bound ent = Bound::zero();
      for (int b : betas) ent = ent + value(b);
      Bound cyc = Bound::zero();
      for (int g : gts) {
        Bound inner = Bound::zero();
        for (int id : comp)
          if (nodes_[id].gt == g && nodes_[id].x == x)
            inner = inner + inc(g, nodes_[id].ch);
        cyc = cyc + rt_.at(g) * inner;
      }
      Bound res = ent + cyc;
      for (int id : comp)
        if (nodes_[id].x == x) fresh_[id] = res;
    }
  }
};

// Deterministic ranking-based count bound for the singleton g under the
// non-increasing candidate set, using the current rt / sz maps (gt-keyed).
inline std::optional<Bound> det_rank_bound(const PIP& pa, int gid,
                                           const std::set<int>& cand,
                                           const std::map<int, Bound>& rt_gt,
                                           const std::map<std::pair<int, Var>, Bound>& sz_gt) {
  auto rf = synthesize_plrf(pa, {gid}, cand, RankMode::Deterministic);
  if (!rf) return std::nullopt;
  Bound total = Bound::zero();
  for (auto& [loc, hs] : pa.entry(cand)) {
    Bound rb = overapprox(rf->at(loc));
    for (int h : hs) {
      std::map<Var, Bound> sub;
      for (auto& v : rb.vars()) sub[v] = sz_gt.at({h, v});
      Bound per = (sub.empty() ? rb : rb.substitute(sub)) + Bound::constant(Rational(1));
      total = total + rt_gt.at(h) * per;
    }
  }
  for (int c : cand)
    if (pa.gts.at(c).source == pa.start) {
      total = total + overapprox(rf->at(pa.start)) + Bound::constant(Rational(1));
      break;
    }
  return total;
}

}  // namespace detail

// Size bounds for a fixed runtime map (gt-keyed maps of the abstracted
// program); iterates passes to a fixpoint.
inline std::map<std::pair<int, Var>, Bound> nonprob_size_gt(
    const PIP& pa, const std::map<int, Bound>& rt_gt) {
  std::map<std::pair<int, Var>, Bound> sz;
  int cap = 2 * static_cast<int>(pa.gts.size()) + 2;
  for (int round = 0; round < cap; ++round) {
    auto fresh = detail::DetSizePass(pa, rt_gt, sz).run();
    bool changed = false;
    for (auto& [k, b] : fresh) {
      auto it = sz.find(k);
      Bound merged = it == sz.end() ? b : prefer(it->second, b);
      if (it == sz.end() || merged != it->second) {
        sz[k] = merged;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return sz;
}

inline BoundPair nonprob_pair(const PIP& pa) {
  BoundPair out;
  if (pa.gts.empty()) return out;

  std::vector<Location> locs = pa.locations();
  std::map<Location, int> lidx;
  for (size_t i = 0; i < locs.size(); ++i) lidx[locs[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> ladj(locs.size());
  for (auto& g : pa.gts)
    for (auto& t : g.members) ladj[lidx[g.source]].push_back(lidx[t.target]);
  auto lscc = tarjan_scc(ladj);

  std::map<int, Bound> rt_gt;
  for (auto& g : pa.gts) {
    const Transition& t = g.members.front();
    bool cyclic = lscc.component_of[lidx[g.source]] == lscc.component_of[lidx[t.target]];
    rt_gt[g.id] = cyclic ? Bound::infinity() : Bound::constant(Rational(1));
  }

  std::map<std::pair<int, Var>, Bound> sz_gt;
  int cap = 2 * static_cast<int>(pa.gts.size());
  for (int round = 0; round < cap; ++round) {
    bool changed = false;
    auto fresh = detail::DetSizePass(pa, rt_gt, sz_gt).run();
    for (auto& [k, b] : fresh) {
      auto it = sz_gt.find(k);
      Bound merged = it == sz_gt.end() ? b : prefer(it->second, b);
      if (it == sz_gt.end() || merged != it->second) {
        sz_gt[k] = merged;
        changed = true;
      }
    }
    for (auto& g : pa.gts) {
      const Transition& t = g.members.front();
      if (lscc.component_of[lidx[g.source]] != lscc.component_of[lidx[t.target]])
        continue;
      for (auto& cand : candidate_gtni(pa, g.id)) {
        auto nb = detail::det_rank_bound(pa, g.id, cand, rt_gt, sz_gt);
        if (!nb) continue;
        Bound merged = prefer(rt_gt.at(g.id), *nb);
        if (merged != rt_gt.at(g.id)) {
          rt_gt[g.id] = merged;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }

  for (auto& g : pa.gts) {
    int tid = g.members.front().id;
    out.rt[tid] = rt_gt.at(g.id);
    for (auto& x : pa.pvars) out.sz[{tid, x}] = sz_gt.at({g.id, x});
  }
  return out;
}

inline std::map<int, Bound> nonprob_runtime(const PIP& pa) { return nonprob_pair(pa).rt; }

inline std::map<std::pair<int, Var>, Bound> nonprob_size(const PIP& pa,
                                                         const std::map<int, Bound>& rt) {
  std::map<int, Bound> rt_gt;
  for (auto& g : pa.gts) rt_gt[g.id] = rt.at(g.members.front().id);
  auto sz_gt = nonprob_size_gt(pa, rt_gt);
  std::map<std::pair<int, Var>, Bound> out;
  for (auto& g : pa.gts) {
    int tid = g.members.front().id;
    for (auto& x : pa.pvars) out[{tid, x}] = sz_gt.at({g.id, x});
  }
  return out;
}

}  // namespace pipbound
