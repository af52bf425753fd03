#pragma once

// Guard constraints: conjunctions of polynomial atoms normalized to "p >= 0".
// Atoms are scaled to integer coefficients; strict comparisons are tightened
// (p > 0 becomes p - 1 >= 0), which is exact over integer-valued states.
// Nonlinear atoms are preserved for concrete evaluation but kept apart so that
// the LP/entailment layer consumes only the linear ones.

#include <optional>
#include <string>
#include <vector>

#include "pipbound/polynomial.hpp"

namespace pipbound {

enum class CmpOp { Lt, Le, Gt, Ge, Eq };

inline std::string cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Eq: return "==";
  }
  return "?";
}

// Scales to integer coefficients and divides by their gcd; keeps orientation.
inline Polynomial scale_to_integers(const Polynomial& p) {
  if (p.is_zero()) return p;
  Int lcm = 1;
  for (auto& [m, c] : p.terms()) lcm = boost::multiprecision::lcm(lcm, rat_den(c));
  Polynomial q = p * Rational(lcm);
  Int g = 0;
  for (auto& [m, c] : q.terms()) g = boost::multiprecision::gcd(g, rat_num(c));
  if (g > 1) q = q * Rational(Int(1), g);
  return q;
}

class Constraint {
 public:
  Constraint() = default;

  // Builds the atom(s) for "lhs op rhs" and conjoins them.
  void add(const Polynomial& lhs, CmpOp op, const Polynomial& rhs) {
    switch (op) {
      case CmpOp::Ge: add_ge(lhs - rhs, false); break;
      case CmpOp::Gt: add_ge(lhs - rhs, true); break;
      case CmpOp::Le: add_ge(rhs - lhs, false); break;
      case CmpOp::Lt: add_ge(rhs - lhs, true); break;
      case CmpOp::Eq:
        add_ge(lhs - rhs, false);
        add_ge(rhs - lhs, false);
        break;
    }
  }

  // Conjoins a normalized atom "p >= 0", skipping syntactic duplicates.
  void add_atom(const Polynomial& p) {
    Polynomial q = scale_to_integers(p);
    if (q.is_constant() && q.constant_value() >= 0) return;  // trivially true
    auto& dst = q.is_linear() ? linear_ : nonlinear_;
    for (auto& a : dst)
      if (a == q) return;
    dst.push_back(q);
  }

  void conjoin(const Constraint& o) {
    for (auto& a : o.linear_) add_atom(a);
    for (auto& a : o.nonlinear_) add_atom(a);
  }

  const std::vector<Polynomial>& linear_atoms() const { return linear_; }
  const std::vector<Polynomial>& nonlinear_atoms() const { return nonlinear_; }
  bool has_nonlinear() const { return !nonlinear_.empty(); }
  bool is_true() const { return linear_.empty() && nonlinear_.empty(); }
  // A constant atom with a negative value makes the guard unsatisfiable.
  bool trivially_false() const {
    for (auto& a : linear_)
      if (a.is_constant() && a.constant_value() < 0) return true;
    return false;
  }

  std::set<Var> vars() const {
    std::set<Var> out;
    for (auto& a : linear_)
      for (auto& v : a.vars()) out.insert(v);
    for (auto& a : nonlinear_)
      for (auto& v : a.vars()) out.insert(v);
    return out;
  }

  bool satisfied_by(const State& s) const {
    for (auto& a : linear_)
      if (a.eval_state(s) < 0) return false;
    for (auto& a : nonlinear_)
      if (a.eval_state(s) < 0) return false;
    return true;
  }

  Constraint substitute(const std::map<Var, Polynomial>& sub) const {
    Constraint out;
    for (auto& a : linear_) out.add_atom(a.substitute(sub));
    for (auto& a : nonlinear_) out.add_atom(a.substitute(sub));
    return out;
  }

  std::string str() const {
    if (is_true()) return "true";
    std::string out;
    bool first = true;
    for (auto& a : linear_) {
      if (!first) out += " && ";
      first = false;
      out += a.str() + " >= 0";
    }
    for (auto& a : nonlinear_) {
      if (!first) out += " && ";
      first = false;
      out += a.str() + " >= 0";
    }
    return out;
  }

 private:
  std::vector<Polynomial> linear_;
  std::vector<Polynomial> nonlinear_;

  void add_ge(const Polynomial& diff, bool strict) {
    Polynomial q = scale_to_integers(diff);
    if (strict) q = q - Polynomial::constant(1);
    add_atom(q);
  }
};

}  // namespace pipbound
