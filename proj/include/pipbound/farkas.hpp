#pragma once

// Linear templates over LP unknowns and the affine Farkas encoding of
// guarded entailments: "premises ≥ 0 imply conclusion ≥ 0" becomes linear
// rows over fresh nonnegative multipliers and the template unknowns.

#include <map>
#include <vector>

#include "pipbound/lp.hpp"
#include "pipbound/polynomial.hpp"

namespace pipbound {

// Affine expression over LP unknowns: Σ terms[id]·u_id + cst.
struct SymLin {
  std::map<int, Rational> terms;
  Rational cst{0};

  static SymLin of_var(int id) {
    SymLin s;
    s.terms[id] = 1;
    return s;
  }
  static SymLin of_const(Rational c) {
    SymLin s;
    s.cst = std::move(c);
    return s;
  }
  SymLin operator+(const SymLin& o) const {
    SymLin s = *this;
    for (auto& [id, c] : o.terms) {
      s.terms[id] += c;
      if (s.terms[id] == 0) s.terms.erase(id);
    }
    s.cst += o.cst;
    return s;
  }
  SymLin operator-(const SymLin& o) const { return *this + (o * Rational(-1)); }
  SymLin operator*(const Rational& k) const {
    SymLin s;
    if (k == 0) return s;
    for (auto& [id, c] : terms) s.terms[id] = c * k;
    s.cst = cst * k;
    return s;
  }
  bool is_zero() const { return terms.empty() && cst == 0; }
};

// Polynomial that is linear in program variables with SymLin coefficients:
// Σ coeff[v]·v + cst, the shape of an instantiated ranking template.
struct SymPoly {
  std::map<Var, SymLin> coeff;
  SymLin cst;

  // *this += s · p for a linear polynomial p with known rational coefficients.
  void add_scaled(const SymLin& s, const Polynomial& p) {
    for (auto& v : p.vars()) add_to(coeff[v], s * p.coeff_of(v));
    cst = cst + s * p.constant_value();
  }
  SymPoly operator+(const SymPoly& o) const {
    SymPoly r = *this;
    for (auto& [v, s] : o.coeff) add_to(r.coeff[v], s);
    r.cst = r.cst + o.cst;
    return r;
  }
  SymPoly operator-(const SymPoly& o) const { return *this + o.scaled(Rational(-1)); }
  SymPoly scaled(const Rational& k) const {
    SymPoly r;
    for (auto& [v, s] : coeff) r.coeff[v] = s * k;
    r.cst = cst * k;
    return r;
  }
  void shift(const Rational& k) { cst.cst += k; }

 private:
  static void add_to(SymLin& dst, const SymLin& s) { dst = dst + s; }
};

// Adds rows forcing: for all real x, (∀i: premises[i](x) ≥ 0) ⟹ conc(x) ≥ 0.
// premises are linear polynomials with known coefficients; conc has SymLin
// coefficients. Encoding: fresh λ ≥ 0 with λᵀA matching conc's linear part
// exactly and λᵀb ≤ conc's constant part.
inline void add_farkas_rows(LpProblem& lp, const std::vector<Polynomial>& premises,
                            const SymPoly& conc) {
  std::vector<int> lambda;
  lambda.reserve(premises.size());
  for (size_t i = 0; i < premises.size(); ++i) lambda.push_back(lp.add_var(true));

  std::set<Var> vars;
  for (auto& p : premises)
    for (auto& v : p.vars()) vars.insert(v);
  for (auto& [v, s] : conc.coeff)
    if (!s.is_zero()) vars.insert(v);

  for (auto& v : vars) {
    std::map<int, Rational> row;
    for (size_t i = 0; i < premises.size(); ++i) {
      Rational a = premises[i].coeff_of(v);
      if (a != 0) row[lambda[i]] += a;
    }
    Rational rhs{0};
    auto it = conc.coeff.find(v);
    if (it != conc.coeff.end()) {
      for (auto& [id, c] : it->second.terms) row[id] -= c;
      rhs = it->second.cst;
    }
    lp.add_row(std::move(row), RowOp::Eq, rhs);
  }

  std::map<int, Rational> crow;
  for (size_t i = 0; i < premises.size(); ++i) {
    Rational b = premises[i].constant_value();
    if (b != 0) crow[lambda[i]] += b;
  }
  for (auto& [id, c] : conc.cst.terms) crow[id] -= c;
  lp.add_row(std::move(crow), RowOp::Le, conc.cst.cst);
}

}  // namespace pipbound
