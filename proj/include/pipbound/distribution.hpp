#pragma once

// Integer probability distributions usable in updates. A distribution update
// adds a sampled value to the updated variable. Every distribution carries
//   - an exact expectation polynomial (over program variables),
//   - a weakly monotone upper bound on the expected absolute sample,
//   - support bounds for the abstraction to nondeterminism,
//   - an exact sampler.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "pipbound/bound.hpp"
#include "pipbound/constraint.hpp"
#include "pipbound/rng.hpp"

namespace pipbound {

enum class DistKind { Bernoulli, Uniform, Geometric, Binomial, Hypergeometric };

struct SimFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Distribution {
  DistKind kind;
  Rational p{0};     // Bernoulli / Geometric / Binomial success probability
  Polynomial a, b;   // Uniform inclusive bounds
  Polynomial n;      // Binomial / Hypergeometric draw count
  Polynomial N, K;   // Hypergeometric population and successes; N constant

  static Distribution bernoulli(const Rational& p) {
    Distribution d;
    d.kind = DistKind::Bernoulli;
    d.p = p;
    return d;
  }
  static Distribution uniform(Polynomial a, Polynomial b) {
    Distribution d;
    d.kind = DistKind::Uniform;
    d.a = std::move(a);
    d.b = std::move(b);
    return d;
  }
  static Distribution geometric(const Rational& p) {
    Distribution d;
    d.kind = DistKind::Geometric;
    d.p = p;
    return d;
  }
  static Distribution binomial(Polynomial n, const Rational& p) {
    Distribution d;
    d.kind = DistKind::Binomial;
    d.n = std::move(n);
    d.p = p;
    return d;
  }
  static Distribution hypergeometric(Polynomial N, Polynomial K, Polynomial n) {
    Distribution d;
    d.kind = DistKind::Hypergeometric;
    d.N = std::move(N);
    d.K = std::move(K);
    d.n = std::move(n);
    return d;
  }

  // Exact expectation as a polynomial over program variables.
  Polynomial expected() const {
    switch (kind) {
      case DistKind::Bernoulli: return Polynomial::constant(p);
      case DistKind::Uniform: return (a + b) * Rational(Int(1), Int(2));
      case DistKind::Geometric: return Polynomial::constant(Rational(1) / p);
      case DistKind::Binomial: return n * p;
      case DistKind::Hypergeometric: {
        // N must be a positive constant for the expectation to stay polynomial.
        Rational Nc = N.constant_value();
        return n * K * (Rational(1) / Nc);
      }
    }
    throw std::logic_error("unknown distribution");
  }

  // Upper bound on the expected absolute sampled value.
  Bound abs_bound() const {
    switch (kind) {
      case DistKind::Bernoulli: return Bound::constant(p);
      case DistKind::Uniform: return overapprox(a) + overapprox(b);
      case DistKind::Geometric: return Bound::constant(Rational(1) / p);
      case DistKind::Binomial: return overapprox(n) * Bound::constant(p);
      case DistKind::Hypergeometric: return overapprox(n);
    }
    throw std::logic_error("unknown distribution");
  }

  struct Support {
    bool has_lo = false, has_hi = false;
    Polynomial lo, hi;
  };
  Support support() const {
    Support s;
    switch (kind) {
      case DistKind::Bernoulli:
        s = {true, true, Polynomial::constant(0), Polynomial::constant(1)};
        break;
      case DistKind::Uniform: s = {true, true, a, b}; break;
      case DistKind::Geometric:
        s.has_lo = true;
        s.lo = Polynomial::constant(1);
        break;
      case DistKind::Binomial: s = {true, true, Polynomial::constant(0), n}; break;
      case DistKind::Hypergeometric: s = {true, true, Polynomial::constant(0), n}; break;
    }
    return s;
  }

  long long sample(Rng& rng, const State& s) const {
    switch (kind) {
      case DistKind::Bernoulli: return rng.bernoulli(p) ? 1 : 0;
      case DistKind::Uniform: {
        Rational ra = a.eval_state(s), rb = b.eval_state(s);
        if (!rat_is_integer(ra) || !rat_is_integer(rb) || ra > rb)
          throw SimFault("invalid Uniform parameters: [" + rat_str(ra) + ", " + rat_str(rb) + "]");
        return rng.uniform_int(ra.convert_to<long long>(), rb.convert_to<long long>());
      }
      case DistKind::Geometric: {
        long long k = 1;
        while (!rng.bernoulli(p)) {
          if (++k > 100000000LL) throw SimFault("Geometric sampling exceeded iteration limit");
        }
        return k;
      }
      case DistKind::Binomial: {
        Rational rn = n.eval_state(s);
        if (!rat_is_integer(rn) || rn < 0 || rn > 1000000)
          throw SimFault("invalid Binomial draw count: " + rat_str(rn));
        long long trials = rn.convert_to<long long>(), succ = 0;
        for (long long i = 0; i < trials; ++i)
          if (rng.bernoulli(p)) ++succ;
        return succ;
      }
      case DistKind::Hypergeometric: {
        Rational rN = N.eval_state(s), rK = K.eval_state(s), rn = n.eval_state(s);
        if (!rat_is_integer(rN) || !rat_is_integer(rK) || !rat_is_integer(rn))
          throw SimFault("non-integer Hypergeometric parameters");
        long long Nv = rN.convert_to<long long>(), Kv = rK.convert_to<long long>(),
                  nv = rn.convert_to<long long>();
        if (Nv <= 0 || Kv < 0 || Kv > Nv || nv < 0 || nv > Nv)
          throw SimFault("invalid Hypergeometric parameters");
        long long succ = 0;
        for (long long i = 0; i < nv; ++i)
          if (rng.below(static_cast<uint64_t>(Nv - i)) < static_cast<uint64_t>(Kv - succ)) ++succ;
        return succ;
      }
    }
    throw std::logic_error("unknown distribution");
  }

  // Variables occurring in the distribution parameters.
  std::set<Var> vars() const {
    std::set<Var> out;
    for (const Polynomial* q : {&a, &b, &n, &N, &K})
      for (const Var& v : q->vars()) out.insert(v);
    return out;
  }

  std::string str() const {
    switch (kind) {
      case DistKind::Bernoulli: return "BERN(" + rat_str(p) + ")";
      case DistKind::Uniform: return "UNIF(" + a.str() + ", " + b.str() + ")";
      case DistKind::Geometric: return "GEO(" + rat_str(p) + ")";
      case DistKind::Binomial: return "BINOM(" + n.str() + ", " + rat_str(p) + ")";
      case DistKind::Hypergeometric:
        return "HYPER(" + N.str() + ", " + K.str() + ", " + n.str() + ")";
    }
    return "?";
  }
};

}  // namespace pipbound
