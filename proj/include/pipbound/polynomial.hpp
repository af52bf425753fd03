#pragma once

// Multivariate polynomials over Q with string-named variables.
// Canonical form: map from monomial to nonzero coefficient.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipbound/rational.hpp"

namespace pipbound {

using Var = std::string;

// Exponent map; entries always have exponent >= 1.
using Monomial = std::map<Var, int>;

// Integer program state. Variables not present default to 0.
using State = std::map<Var, long long>;

inline int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto& [v, e] : m) d += e;
  return d;
}

// Graded-lex order used for printing: higher total degree first, lex tie-break.
inline bool monomial_graded_before(const Monomial& a, const Monomial& b) {
  int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da > db;
  return a < b;
}

class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_[Monomial{}] = c;
    return p;
  }
  static Polynomial variable(const Var& v) {
    Polynomial p;
    p.terms_[Monomial{{v, 1}}] = 1;
    return p;
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rational constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return constant_value(); }

  int degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
  }
  bool is_linear() const { return degree() <= 1; }

  std::set<Var> vars() const {
    std::set<Var> out;
    for (auto& [m, c] : terms_)
      for (auto& [v, e] : m) out.insert(v);
    return out;
  }
  bool mentions(const Var& v) const { return vars().count(v) > 0; }

  // Coefficient of a bare variable (degree-1 monomial).
  Rational coeff_of(const Var& v) const {
    auto it = terms_.find(Monomial{{v, 1}});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Polynomial operator-() const {
    Polynomial p;
    for (auto& [m, c] : terms_) p.terms_[m] = -c;
    return p;
  }
  Polynomial operator+(const Polynomial& o) const {
    Polynomial p = *this;
    for (auto& [m, c] : o.terms_) p.add_term(m, c);
    return p;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial p;
    for (auto& [m1, c1] : terms_)
      for (auto& [m2, c2] : o.terms_) {
        Monomial m = m1;
        for (auto& [v, e] : m2) m[v] += e;
        p.add_term(m, c1 * c2);
      }
    return p;
  }
  Polynomial operator*(const Rational& k) const {
    Polynomial p;
    if (k == 0) return p;
    for (auto& [m, c] : terms_) p.terms_[m] = c * k;
    return p;
  }
  Polynomial pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial acc = constant(1), b = *this;
    while (e > 0) {
      if (e & 1) acc = acc * b;
      b = b * b;
      e >>= 1;
    }
    return acc;
  }

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Simultaneous substitution; variables absent from the map stay themselves.
  Polynomial substitute(const std::map<Var, Polynomial>& sub) const {
    Polynomial out;
    for (auto& [m, c] : terms_) {
      Polynomial term = constant(c);
      for (auto& [v, e] : m) {
        auto it = sub.find(v);
        Polynomial base = it == sub.end() ? variable(v) : it->second;
        term = term * base.pow(e);
      }
      out = out + term;
    }
    return out;
  }

  Rational eval(const std::map<Var, Rational>& vals) const {
    Rational out(0);
    for (auto& [m, c] : terms_) {
      Rational t = c;
      for (auto& [v, e] : m) {
        auto it = vals.find(v);
        if (it == vals.end()) throw std::out_of_range("unbound variable in eval: " + v);
        t *= rat_pow(it->second, static_cast<unsigned long>(e));
      }
      out += t;
    }
    return out;
  }
  Rational eval_state(const State& s) const {
    std::map<Var, Rational> vals;
    for (auto v : vars()) {
      auto it = s.find(v);
      vals[v] = Rational(it == s.end() ? 0 : it->second);
    }
    return eval(vals);
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, Rational>*> ts;
    for (auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) {
      return monomial_graded_before(a->first, b->first);
    });
    std::string out;
    bool first = true;
    for (auto* t : ts) {
      Rational c = t->second;
      bool neg = c < 0;
      if (first) {
        if (neg) out += "-";
        first = false;
      } else {
        out += neg ? " - " : " + ";
      }
      out += term_str(t->first, rat_abs(c));
    }
    return out;
  }

 private:
  std::map<Monomial, Rational> terms_;

  void add_term(const Monomial& m, const Rational& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_[m] = c;
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  static std::string term_str(const Monomial& m, const Rational& c) {
    std::string out;
    bool coeff_shown = m.empty() || c != 1;
    if (coeff_shown) out += rat_str(c);
    bool first = !coeff_shown;
    for (auto& [v, e] : m) {
      if (!first) out += "*";
      first = false;
      out += v;
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }
};

inline Polynomial operator*(const Rational& k, const Polynomial& p) { return p * k; }

inline std::map<Var, Rational> abs_state(const State& s) {
  std::map<Var, Rational> out;
  for (auto& [v, x] : s) out[v] = Rational(x < 0 ? -x : x);
  return out;
}

}  // namespace pipbound
