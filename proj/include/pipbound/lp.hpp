#pragma once

// Exact linear programming over rationals: two-phase primal simplex with
// Bland's rule (termination guaranteed, no numerical drift). Problems here
// are small — dozens of rows — so a dense tableau is the right trade.

#include <map>
#include <optional>
#include <vector>

#include "pipbound/rational.hpp"

namespace pipbound {

enum class RowOp { Ge, Le, Eq };

class LpProblem {
 public:
  // Free variables are split into differences of nonnegatives internally.
  int add_var(bool nonneg) {
    nonneg_.push_back(nonneg);
    return static_cast<int>(nonneg_.size()) - 1;
  }

  void add_row(std::map<int, Rational> coeffs, RowOp op, Rational rhs) {
    rows_.push_back(Row{std::move(coeffs), op, std::move(rhs)});
  }

  int var_count() const { return static_cast<int>(nonneg_.size()); }

  // Any feasible point, or nullopt.
  std::optional<std::vector<Rational>> solve() const { return run(nullptr); }

  // Feasible point minimizing Σ |v| over the given variables.
  std::optional<std::vector<Rational>> minimize_l1(const std::vector<int>& vars) const {
    return run(&vars);
  }

 private:
  struct Row {
    std::map<int, Rational> coeffs;
    RowOp op;
    Rational rhs;
  };
  std::vector<bool> nonneg_;
  std::vector<Row> rows_;

  struct Tableau {
    int m = 0, n = 0;                      // rows, columns (rhs excluded)
    std::vector<std::vector<Rational>> a;  // m x (n+1); last column is rhs
    std::vector<int> basis;
    std::vector<Rational> z;  // n+1 reduced costs; z[n] = -objective

    void pivot(int r, int c) {
      Rational piv = a[r][c];
      for (int j = 0; j <= n; ++j) a[r][j] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == r || a[i][c] == 0) continue;
        Rational f = a[i][c];
        for (int j = 0; j <= n; ++j) a[i][j] -= f * a[r][j];
      }
      if (z[c] != 0) {
        Rational f = z[c];
        for (int j = 0; j <= n; ++j) z[j] -= f * a[r][j];
      }
      basis[r] = c;
    }

    // Bland's rule; entering restricted to columns < limit. False = unbounded.
    bool optimize(int limit) {
      while (true) {
        int enter = -1;
        for (int j = 0; j < limit; ++j)
          if (z[j] < 0) {
            enter = j;
            break;
          }
        if (enter < 0) return true;
        int leave = -1;
        Rational best{0};
        for (int i = 0; i < m; ++i) {
          if (a[i][enter] <= 0) continue;
          Rational ratio = a[i][n] / a[i][enter];
          if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
        if (leave < 0) return false;
        pivot(leave, enter);
      }
    }
  };

  std::optional<std::vector<Rational>> run(const std::vector<int>* l1_vars) const {
    int nv = var_count();
    // Column layout: per-variable one column (nonneg) or two (free split),
    // then one slack per inequality row.
    std::vector<int> pos(nv), neg(nv, -1);
    int ncols = 0;
    for (int k = 0; k < nv; ++k) {
      pos[k] = ncols++;
      if (!nonneg_[k]) neg[k] = ncols++;
    }
    struct Dense {
      std::vector<Rational> a;
      Rational b;
    };
    std::vector<Dense> dense;
    int nslack = 0;
    for (auto& r : rows_) nslack += r.op != RowOp::Eq ? 1 : 0;
    int total = ncols + nslack;
    int slack_at = ncols;
    for (auto& r : rows_) {
      Dense d;
      d.a.assign(total, Rational(0));
      bool all_zero = true;
      for (auto& [k, c] : r.coeffs) {
        if (c == 0) continue;
        all_zero = false;
        d.a[pos[k]] += c;
        if (neg[k] >= 0) d.a[neg[k]] -= c;
      }
      d.b = r.rhs;
      if (all_zero) {
        bool ok = r.op == RowOp::Ge   ? Rational(0) >= r.rhs
                  : r.op == RowOp::Le ? Rational(0) <= r.rhs
                                      : r.rhs == 0;
        if (!ok) return std::nullopt;
        if (r.op != RowOp::Eq) ++slack_at;  // keep layout stable
        continue;
      }
      if (r.op == RowOp::Ge) d.a[slack_at++] = Rational(-1);
      if (r.op == RowOp::Le) d.a[slack_at++] = Rational(1);
      if (d.b < 0) {
        for (auto& x : d.a) x = -x;
        d.b = -d.b;
      }
      dense.push_back(std::move(d));
    }

    int m = static_cast<int>(dense.size());
    std::vector<Rational> x(nv, Rational(0));
    if (m == 0) return x;

    // Phase 1: artificial basis, minimize the artificial sum.
    Tableau t;
    t.m = m;
    t.n = total + m;
    t.a.assign(m, std::vector<Rational>(t.n + 1, Rational(0)));
    t.basis.resize(m);
    t.z.assign(t.n + 1, Rational(0));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < total; ++j) t.a[i][j] = dense[i].a[j];
      t.a[i][total + i] = Rational(1);
      t.a[i][t.n] = dense[i].b;
      t.basis[i] = total + i;
      for (int j = 0; j < total; ++j) t.z[j] -= dense[i].a[j];
      t.z[t.n] -= dense[i].b;
    }
    t.optimize(t.n);
    if (t.z[t.n] != 0) return std::nullopt;
    for (int i = 0; i < t.m;) {
      if (t.basis[i] < total) {
        ++i;
        continue;
      }
      int j = 0;
      while (j < total && t.a[i][j] == 0) ++j;
      if (j < total) {
        t.pivot(i, j);
        ++i;
      } else {
        t.a.erase(t.a.begin() + i);
        t.basis.erase(t.basis.begin() + i);
        t.m = static_cast<int>(t.a.size());
      }
    }

    // Phase 2 (optional): minimize Σ|v| as the sum of split columns.
    if (l1_vars && !l1_vars->empty()) {
      std::vector<Rational> cost(t.n, Rational(0));
      for (int k : *l1_vars) {
        cost[pos[k]] += 1;
        if (neg[k] >= 0) cost[neg[k]] += 1;
      }
      t.z.assign(t.n + 1, Rational(0));
      for (int j = 0; j < t.n; ++j) t.z[j] = cost[j];
      for (int i = 0; i < t.m; ++i) {
        if (cost[t.basis[i]] == 0) continue;
        Rational f = cost[t.basis[i]];
        for (int j = 0; j <= t.n; ++j) t.z[j] -= f * t.a[i][j];
      }
      t.optimize(total);  // artificial columns stay out
    }

    std::vector<Rational> col_val(t.n, Rational(0));
    for (int i = 0; i < t.m; ++i) col_val[t.basis[i]] = t.a[i][t.n];
    for (int k = 0; k < nv; ++k) {
      x[k] = col_val[pos[k]];
      if (neg[k] >= 0) x[k] -= col_val[neg[k]];
    }
    return x;
  }
};

}  // namespace pipbound
