#pragma once

// Program model: probabilistic integer programs over locations and general
// transitions, plus the structural queries used by the analyses and the
// deterministic over-approximation that replaces sampling by nondeterminism.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pipbound/constraint.hpp"
#include "pipbound/distribution.hpp"
#include "pipbound/polynomial.hpp"

namespace pipbound {

using Location = std::string;

// Right-hand side of an update: either a polynomial over program and
// temporary variables, or a distribution whose sample is added to the
// current value of the updated variable.
struct UpdateRhs {
  bool is_dist = false;
  Polynomial poly;
  Distribution dist = Distribution::bernoulli(Rational(1));

  static UpdateRhs of(Polynomial p) {
    UpdateRhs u;
    u.is_dist = false;
    u.poly = std::move(p);
    return u;
  }
  static UpdateRhs of(Distribution d) {
    UpdateRhs u;
    u.is_dist = true;
    u.dist = std::move(d);
    return u;
  }
  std::string str() const { return is_dist ? dist.str() : poly.str(); }
};

struct Transition {
  int id = 0;  // global index; printed as t<id>
  Rational probability{1};
  Location target;
  std::map<Var, UpdateRhs> update;  // variables absent from the map keep their value

  std::string name() const { return "t" + std::to_string(id); }
};

struct GeneralTransition {
  int id = 0;  // printed as g<id>
  Location source;
  Constraint guard;
  Rational cost{1};
  std::vector<Transition> members;

  std::string name() const { return "g" + std::to_string(id); }

  std::vector<Location> targets() const {
    std::set<Location> s;
    for (auto& t : members) s.insert(t.target);
    return {s.begin(), s.end()};
  }
};

// General result variable: the value of x observed at ℓ right after g fired.
struct Grv {
  int gt = 0;
  Location target;
  Var var;

  bool operator<(const Grv& o) const {
    return std::tie(gt, target, var) < std::tie(o.gt, o.target, o.var);
  }
  bool operator==(const Grv& o) const {
    return gt == o.gt && target == o.target && var == o.var;
  }
  std::string str() const { return "(g" + std::to_string(gt) + ", " + target + ", " + var + ")"; }
};

class PIP {
 public:
  std::vector<Var> pvars;  // ordered program variables
  Location start;
  std::vector<GeneralTransition> gts;

  bool is_pvar(const Var& v) const {
    return std::find(pvars.begin(), pvars.end(), v) != pvars.end();
  }

  std::vector<Location> locations() const {
    std::set<Location> s{start};
    for (auto& g : gts) {
      s.insert(g.source);
      for (auto& t : g.members) s.insert(t.target);
    }
    return {s.begin(), s.end()};
  }

  // Variables mentioned anywhere that are not program variables.
  std::set<Var> temp_vars() const {
    std::set<Var> out;
    auto keep = [&](const std::set<Var>& vs) {
      for (auto& v : vs)
        if (!is_pvar(v)) out.insert(v);
    };
    for (auto& g : gts) {
      keep(g.guard.vars());
      for (auto& t : g.members)
        for (auto& [x, u] : t.update)
          if (!u.is_dist) keep(u.poly.vars());
    }
    return out;
  }

  int transition_count() const {
    int n = 0;
    for (auto& g : gts) n += static_cast<int>(g.members.size());
    return n;
  }

  const GeneralTransition* gt_of_member(int tid) const {
    for (auto& g : gts)
      for (auto& t : g.members)
        if (t.id == tid) return &g;
    return nullptr;
  }

  const Transition* member(int tid) const {
    for (auto& g : gts)
      for (auto& t : g.members)
        if (t.id == tid) return &t;
    return nullptr;
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> errs;
    for (auto& g : gts) {
      if (g.members.empty()) {
        errs.push_back(g.name() + ": has no members");
        continue;
      }
      Rational sum{0};
      for (auto& t : g.members) {
        sum += t.probability;
        if (t.probability < 0 || t.probability > 1)
          errs.push_back(t.name() + ": probability " + rat_str(t.probability) +
                         " outside [0,1]");
        if (t.target == start)
          errs.push_back(t.name() + ": initial location has incoming transition");
        for (auto& [x, u] : t.update) {
          if (!is_pvar(x))
            errs.push_back(t.name() + ": update assigns non-program variable " + x);
          if (u.is_dist && u.dist.kind == DistKind::Hypergeometric &&
              !(u.dist.N.is_constant() && u.dist.N.constant_value() > 0))
            errs.push_back(t.name() +
                           ": hypergeometric population must be a positive constant");
        }
      }
      if (sum != 1)
        errs.push_back(g.name() + ": probabilities sum to " + rat_str(sum));
      if (g.cost < 0) errs.push_back(g.name() + ": negative cost " + rat_str(g.cost));
    }
    return errs;
  }

  // General transitions with a member targeting the source of g.
  std::vector<int> pre_gts(int gid) const {
    const Location& src = gts.at(gid).source;
    std::vector<int> out;
    for (auto& h : gts)
      for (auto& t : h.members)
        if (t.target == src) {
          out.push_back(h.id);
          break;
        }
    return out;
  }

  // Entry map of a transition set: for each source location of a transition
  // in gtni, the transitions outside gtni with a member targeting it.
  // Locations whose entry set is empty are omitted.
  std::map<Location, std::vector<int>> entry(const std::set<int>& gtni) const {
    std::set<Location> starts;
    for (int gid : gtni) starts.insert(gts.at(gid).source);
    std::map<Location, std::vector<int>> out;
    for (auto& loc : starts) {
      std::vector<int> ent;
      for (auto& h : gts) {
        if (gtni.count(h.id)) continue;
        for (auto& t : h.members)
          if (t.target == loc) {
            ent.push_back(h.id);
            break;
          }
      }
      if (!ent.empty()) out[loc] = std::move(ent);
    }
    return out;
  }

  std::vector<Grv> grvs() const {
    std::vector<Grv> out;
    for (auto& g : gts)
      for (auto& loc : g.targets())
        for (auto& x : pvars) out.push_back(Grv{g.id, loc, x});
    return out;
  }

  std::string str() const {
    std::string out = "vars";
    for (auto& v : pvars) out += " " + v;
    out += "\nstart " + start + "\n";
    for (auto& g : gts) {
      out += g.source + " ->";
      bool first = true;
      for (auto& t : g.members) {
        if (!first) out += " (+)";
        first = false;
        out += " " + rat_str(t.probability) + ": " + t.target + "(";
        bool firstu = true;
        for (auto& [x, u] : t.update) {
          if (!firstu) out += ", ";
          firstu = false;
          out += x + " = " + u.str();
        }
        out += ")";
      }
      if (!g.guard.is_true()) out += " :|: " + g.guard.str();
      out += " {" + rat_str(g.cost) + "}\n";
    }
    return out;
  }
};

// Result of the deterministic abstraction: each member becomes its own
// general transition of probability 1, and sampling becomes a guarded
// nondeterministic additive temporary.
struct AbstractionInfo {
  PIP prog;
  std::map<int, int> origin_gt;      // new gt id -> original gt id
  std::map<int, int> origin_member;  // new gt id -> original member transition id
};

inline AbstractionInfo abstract_nonprob(const PIP& p) {
  AbstractionInfo info;
  info.prog.pvars = p.pvars;
  info.prog.start = p.start;
  int next = 0;
  for (auto& g : p.gts) {
    for (auto& t : g.members) {
      GeneralTransition ng;
      ng.id = next++;
      ng.source = g.source;
      ng.guard = g.guard;
      ng.cost = g.cost;
      Transition nt;
      nt.id = t.id;  // keep the original transition identity
      nt.probability = Rational(1);
      nt.target = t.target;
      for (auto& [x, u] : t.update) {
        if (!u.is_dist) {
          nt.update[x] = u;
          continue;
        }
        Var fresh = "u$" + x;
        nt.update[x] = UpdateRhs::of(Polynomial::variable(x) + Polynomial::variable(fresh));
        auto sup = u.dist.support();
        if (sup.has_lo)
          ng.guard.add(Polynomial::variable(fresh), CmpOp::Ge, sup.lo);
        if (sup.has_hi)
          ng.guard.add(Polynomial::variable(fresh), CmpOp::Le, sup.hi);
      }
      ng.members.push_back(std::move(nt));
      info.origin_gt[ng.id] = g.id;
      info.origin_member[ng.id] = t.id;
      info.prog.gts.push_back(std::move(ng));
    }
  }
  return info;
}

}  // namespace pipbound
