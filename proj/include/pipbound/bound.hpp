#pragma once

// Weakly monotone upper-bound expressions: nonnegative rational combinations
// of variables and exponential atoms base^(bound), plus a distinct infinity.
// Invariants of the normal form:
//   - coefficients are strictly positive rationals,
//   - exponent positions hold sub-bounds (recursively normalized),
//   - base^(k) with constant integer k >= 0 is folded to a rational,
//   - 0 * inf simplifies to 0 (multiplication checks zero before infinity).
// Evaluation plugs in absolute values of a state, so every bound is monotone
// in each variable by construction.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pipbound/polynomial.hpp"

namespace pipbound {

class Bound;
using BoundPtr = std::shared_ptr<const Bound>;

struct BAtom {
  enum Kind { VarAtom, ExpAtom } kind;
  Var var;        // VarAtom
  Rational base;  // ExpAtom, base >= 1
  BoundPtr exponent;

  static BAtom make_var(const Var& v) { return BAtom{VarAtom, v, Rational(0), nullptr}; }
  static BAtom make_exp(const Rational& b, BoundPtr e) {
    return BAtom{ExpAtom, Var{}, b, std::move(e)};
  }
  int cmp(const BAtom& o) const;
  bool operator<(const BAtom& o) const { return cmp(o) < 0; }
};

struct BAtomLess {
  bool operator()(const BAtom& a, const BAtom& b) const { return a.cmp(b) < 0; }
};
using BMonomial = std::map<BAtom, int, BAtomLess>;

struct AsymptoticClass {
  enum Kind { Const, Poly, Exp, Infinite } kind = Const;
  int degree = 0;  // meaningful for Poly only

  static AsymptoticClass constant() { return {Const, 0}; }
  static AsymptoticClass poly(int d) { return d == 0 ? constant() : AsymptoticClass{Poly, d}; }
  static AsymptoticClass exponential() { return {Exp, 0}; }
  static AsymptoticClass infinite() { return {Infinite, 0}; }

  int rank() const {
    switch (kind) {
      case Const: return 0;
      case Poly: return degree;
      case Exp: return 1 << 20;
      case Infinite: return 1 << 21;
    }
    return 0;
  }
  bool operator<(const AsymptoticClass& o) const { return rank() < o.rank(); }
  bool operator==(const AsymptoticClass& o) const { return rank() == o.rank(); }

  std::string str() const {
    switch (kind) {
      case Const: return "O(1)";
      case Poly: return degree == 1 ? "O(n)" : "O(n^" + std::to_string(degree) + ")";
      case Exp: return "EXP";
      case Infinite: return "INF";
    }
    return "?";
  }
};

struct BoundEval {
  bool infinite = false;
  Rational value{0};
};

class Bound {
 public:
  Bound() = default;  // zero

  static Bound infinity() {
    Bound b;
    b.inf_ = true;
    return b;
  }
  static Bound zero() { return Bound(); }
  static Bound constant(const Rational& c) {
    if (c < 0) throw std::invalid_argument("negative constant in bound");
    Bound b;
    if (c != 0) b.terms_[BMonomial{}] = c;
    return b;
  }
  static Bound variable(const Var& v) {
    Bound b;
    BMonomial m;
    m[BAtom::make_var(v)] = 1;
    b.terms_[m] = 1;
    return b;
  }
  // base^(e); folds trivial cases into exact rationals.
  static Bound exp(const Rational& base, const Bound& e) {
    if (base < 1) throw std::invalid_argument("exp base must be >= 1");
    if (base == 1) return constant(1);
    if (e.is_infinite()) return infinity();
    if (e.is_constant()) {
      Rational c = e.constant_value();
      if (rat_is_integer(c) && c >= 0)
        return constant(rat_pow(base, c.convert_to<unsigned long>()));
    }
    Bound b;
    BMonomial m;
    m[BAtom::make_exp(base, std::make_shared<Bound>(e))] = 1;
    b.terms_[m] = 1;
    return b;
  }

  bool is_infinite() const { return inf_; }
  bool is_zero() const { return !inf_ && terms_.empty(); }
  bool is_constant() const {
    return !inf_ && (terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()));
  }
  Rational constant_value() const {
    auto it = terms_.find(BMonomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  struct MonLess {
    bool operator()(const BMonomial& a, const BMonomial& b) const { return mon_cmp(a, b) < 0; }
  };

  Bound operator+(const Bound& o) const {
    if (inf_ || o.inf_) return infinity();
    Bound b = *this;
    for (auto& [m, c] : o.terms_) b.add_term(m, c);
    return b;
  }
  Bound operator*(const Bound& o) const {
    if (is_zero() || o.is_zero()) return zero();  // 0 * inf = 0
    if (inf_ || o.inf_) return infinity();
    Bound b;
    for (auto& [m1, c1] : terms_)
      for (auto& [m2, c2] : o.terms_) {
        BMonomial m = m1;
        for (auto& [a, e] : m2) m[a] += e;
        b.add_term(m, c1 * c2);
      }
    return b;
  }
  Bound operator*(const Rational& k) const {
    if (k < 0) throw std::invalid_argument("negative scalar on bound");
    if (k == 0) return zero();
    if (inf_) return infinity();
    Bound b;
    for (auto& [m, c] : terms_) b.terms_[m] = c * k;
    return b;
  }
  Bound pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative bound power");
    Bound acc = constant(1), b = *this;
    while (e > 0) {
      if (e & 1) acc = acc * b;
      b = b * b;
      e >>= 1;
    }
    return acc;
  }

  // Max total degree over variable atoms; exponential atoms contribute 0 here.
  int poly_degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) {
      int t = 0;
      for (auto& [a, e] : m)
        if (a.kind == BAtom::VarAtom) t += e;
      d = std::max(d, t);
    }
    return d;
  }

  bool has_nonconst_exp() const {
    for (auto& [m, c] : terms_)
      for (auto& [a, e] : m)
        if (a.kind == BAtom::ExpAtom &&
            (!a.exponent->is_constant() || a.exponent->has_nonconst_exp()))
          return true;
    return false;
  }

  // Linear means: finite, every monomial has variable-degree <= 1 and carries
  // no exponential atom with a non-constant exponent. Such bounds are concave.
  bool is_linear() const {
    if (inf_) return false;
    if (has_nonconst_exp()) return false;
    return poly_degree() <= 1;
  }

  AsymptoticClass asym() const {
    if (inf_) return AsymptoticClass::infinite();
    if (has_nonconst_exp()) return AsymptoticClass::exponential();
    return AsymptoticClass::poly(poly_degree());
  }

  size_t monomial_count() const { return terms_.size(); }
  Rational coeff_sum() const {
    Rational s(0);
    for (auto& [m, c] : terms_) s += c;
    return s;
  }

  std::set<Var> vars() const {
    std::set<Var> out;
    collect_vars(out);
    return out;
  }

  Bound substitute(const std::map<Var, Bound>& sub) const {
    if (inf_) return infinity();
    Bound out;
    for (auto& [m, c] : terms_) {
      Bound term = constant(c);
      for (auto& [a, e] : m) {
        Bound factor;
        if (a.kind == BAtom::VarAtom) {
          auto it = sub.find(a.var);
          factor = it == sub.end() ? variable(a.var) : it->second;
        } else {
          factor = exp(a.base, a.exponent->substitute(sub));
        }
        term = term * factor.pow(e);
      }
      out = out + term;
    }
    return out;
  }

  // Values are absolute values of a state; result is exact. A non-integer
  // constant exponent is rounded up (sound: base >= 1).
  BoundEval eval(const std::map<Var, Rational>& absvals) const {
    if (inf_) return {true, Rational(0)};
    Rational out(0);
    for (auto& [m, c] : terms_) {
      Rational t = c;
      for (auto& [a, e] : m) {
        Rational av;
        if (a.kind == BAtom::VarAtom) {
          auto it = absvals.find(a.var);
          if (it == absvals.end()) throw std::out_of_range("unbound variable in bound eval: " + a.var);
          if (it->second < 0) throw std::invalid_argument("bound eval expects absolute values");
          av = it->second;
        } else {
          BoundEval ee = a.exponent->eval(absvals);
          if (ee.infinite) return {true, Rational(0)};
          av = rat_pow(a.base, rat_ceil(ee.value).convert_to<unsigned long>());
        }
        t *= rat_pow(av, static_cast<unsigned long>(e));
      }
      out += t;
    }
    return {false, out};
  }
  BoundEval eval_state(const State& s) const {
    auto vals = abs_state(s);
    for (auto& v : vars())
      if (!vals.count(v)) vals[v] = 0;
    return eval(vals);
  }

  static int cmp(const Bound& a, const Bound& b);
  bool operator==(const Bound& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const Bound& o) const { return cmp(*this, o) != 0; }

  std::string str() const {
    if (inf_) return "inf";
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const BMonomial, Rational>*> ts;
    for (auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](auto* x, auto* y) { return mon_graded_before(x->first, y->first); });
    std::string out;
    bool first = true;
    for (auto* t : ts) {
      if (!first) out += " + ";
      first = false;
      out += term_str(t->first, t->second);
    }
    return out;
  }

  const std::map<BMonomial, Rational, MonLess>& raw_terms() const { return terms_; }

 private:
  bool inf_ = false;
  std::map<BMonomial, Rational, MonLess> terms_;

  void add_term(const BMonomial& m, const Rational& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_[m] = c;
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  void collect_vars(std::set<Var>& out) const {
    for (auto& [m, c] : terms_)
      for (auto& [a, e] : m) {
        if (a.kind == BAtom::VarAtom)
          out.insert(a.var);
        else
          a.exponent->collect_vars(out);
      }
  }

  static int mon_cmp(const BMonomial& a, const BMonomial& b) {
    auto ia = a.begin(), ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      int c = ia->first.cmp(ib->first);
      if (c != 0) return c;
      if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.end()) return 1;
    if (ib != b.end()) return -1;
    return 0;
  }

  static int mon_var_degree(const BMonomial& m) {
    int d = 0;
    for (auto& [a, e] : m) d += e;
    return d;
  }
  static bool mon_graded_before(const BMonomial& a, const BMonomial& b) {
    int da = mon_var_degree(a), db = mon_var_degree(b);
    if (da != db) return da > db;
    return mon_cmp(a, b) < 0;
  }

  static std::string term_str(const BMonomial& m, const Rational& c) {
    std::string out;
    bool coeff_shown = m.empty() || c != 1;
    if (coeff_shown) out += rat_str(c);
    bool first = !coeff_shown;
    for (auto& [a, e] : m) {
      if (!first) out += "*";
      first = false;
      if (a.kind == BAtom::VarAtom) {
        out += a.var;
      } else {
        out += rat_str(a.base) + "^(" + a.exponent->str() + ")";
      }
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

  friend struct BAtom;
};

inline int BAtom::cmp(const BAtom& o) const {
  if (kind != o.kind) return kind < o.kind ? -1 : 1;
  if (kind == VarAtom) return var < o.var ? -1 : (var == o.var ? 0 : 1);
  if (base != o.base) return base < o.base ? -1 : 1;
  return Bound::cmp(*exponent, *o.exponent);
}

inline int Bound::cmp(const Bound& a, const Bound& b) {
  if (a.inf_ != b.inf_) return a.inf_ ? 1 : -1;
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    int c = mon_cmp(ia->first, ib->first);
    if (c != 0) return c;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
  }
  if (ia != a.terms_.end()) return 1;
  if (ib != b.terms_.end()) return -1;
  return 0;
}

inline Bound operator*(const Rational& k, const Bound& b) { return b * k; }

// |.| lift of a polynomial: coefficients replaced by their absolute values
// (the polynomial should be simplified first; cancellation already happened).
inline Bound overapprox(const Polynomial& p) {
  Bound out;
  for (auto& [m, c] : p.terms()) {
    Bound term = Bound::constant(rat_abs(c));
    for (auto& [v, e] : m) term = term * Bound::variable(v).pow(e);
    out = out + term;
  }
  return out;
}

// Selection heuristic for keeping the better of two sound bounds:
// smaller asymptotic class, then fewer monomials, then smaller coefficient
// sum, then the incumbent.
inline Bound prefer(const Bound& incumbent, const Bound& candidate) {
  AsymptoticClass ci = incumbent.asym(), cc = candidate.asym();
  if (cc < ci) return candidate;
  if (ci < cc) return incumbent;
  if (incumbent.is_infinite()) return incumbent;
  if (candidate.monomial_count() != incumbent.monomial_count())
    return candidate.monomial_count() < incumbent.monomial_count() ? candidate : incumbent;
  if (candidate.coeff_sum() < incumbent.coeff_sum()) return candidate;
  return incumbent;
}

}  // namespace pipbound
