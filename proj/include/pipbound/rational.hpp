#pragma once

// Exact arbitrary-precision rational arithmetic used throughout the analyzer.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pipbound {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool rat_is_integer(const Rational& q) { return rat_den(q) == 1; }

// Floor of a rational; denominator is kept positive by cpp_rational.
inline Int rat_floor(const Rational& q) {
  Int n = rat_num(q), d = rat_den(q);
  Int quo = n / d, rem = n % d;
  if (rem != 0 && n < 0) --quo;
  return quo;
}

inline Int rat_ceil(const Rational& q) {
  Int n = rat_num(q), d = rat_den(q);
  Int quo = n / d, rem = n % d;
  if (rem != 0 && n > 0) ++quo;
  return quo;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational rat_pow(const Rational& base, unsigned long e) {
  Rational acc(1), b = base;
  unsigned long k = e;
  while (k > 0) {
    if (k & 1UL) acc *= b;
    b *= b;
    k >>= 1UL;
  }
  return acc;
}

// Renders "a" for integers, "a/b" otherwise.
inline std::string rat_str(const Rational& q) {
  std::string s = rat_num(q).str();
  if (!rat_is_integer(q)) s += "/" + rat_den(q).str();
  return s;
}

inline Rational rat_of(long long n) { return Rational(n); }

inline Rational rat_frac(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(Int(n), Int(d));
}

inline double rat_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace pipbound
