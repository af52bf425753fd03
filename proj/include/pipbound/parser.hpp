#pragma once

// Text format for probabilistic integer programs.
//
//   # comment
//   vars x y
//   start l0
//   l0 -> l1(x = 3*y, y = UNIF(0,2))
//   l1 -> 1/2: l1(x = x-1) (+) 1/2: l2() :|: x > 0 && y <= 5 {2}
//
// A rule is one general transition; branches are separated by (+), carry an
// optional probability (default 1), and the probabilities of a rule must sum
// to 1. Variables omitted from an update list keep their value; only declared
// variables may be assigned. The optional {COST} is a nonnegative rational,
// default 1. Identifiers not listed under `vars` are temporary variables.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipbound/pip.hpp"

namespace pipbound {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
};

namespace detail {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind = End;
  std::string text;
  int line = 0, col = 0;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto peek = [&](size_t k) { return i + k < src.size() ? src[i + k] : '\0'; };
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* multi[] = {"(+)", ":|:", "->", "==", "<=", ">=", "&&"};
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = 0;
      while (std::isalnum(static_cast<unsigned char>(peek(j))) || peek(j) == '_') ++j;
      t.kind = Token::Ident;
      t.text = src.substr(i, j);
      advance(j);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = 0;
      while (std::isdigit(static_cast<unsigned char>(peek(j)))) ++j;
      t.kind = Token::Number;
      t.text = src.substr(i, j);
      advance(j);
    } else {
      t.kind = Token::Sym;
      bool matched = false;
      for (const char* m : multi) {
        size_t len = std::string(m).size();
        if (src.compare(i, len, m) == 0) {
          t.text = m;
          advance(len);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string singles = "()+-*/^=<>:,{}";
        if (singles.find(c) == std::string::npos)
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Token::End, "", line, col});
  return out;
}

class RuleParser {
 public:
  explicit RuleParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  PIP run() {
    PIP p;
    bool saw_vars = false, saw_start = false;
    int next_tid = 0;
    while (cur().kind != Token::End) {
      if (cur().kind != Token::Ident) fail("expected 'vars', 'start', or a rule");
      if (cur().text == "vars") {
        if (saw_vars) fail("duplicate 'vars' header");
        saw_vars = true;
        next();
        while (cur().kind == Token::Ident && cur().text != "start" &&
               cur().text != "vars" && !starts_rule()) {
          if (p.is_pvar(cur().text)) fail("duplicate program variable " + cur().text);
          p.pvars.push_back(cur().text);
          next();
        }
        if (p.pvars.empty()) fail("'vars' lists no variables");
      } else if (cur().text == "start") {
        if (saw_start) fail("duplicate 'start' header");
        saw_start = true;
        next();
        if (cur().kind != Token::Ident) fail("expected start location name");
        p.start = cur().text;
        next();
      } else {
        if (!saw_vars) fail("rule before 'vars' header");
        p.gts.push_back(parse_rule(p, next_tid));
        p.gts.back().id = static_cast<int>(p.gts.size()) - 1;
      }
    }
    if (!saw_vars) fail("missing 'vars' header");
    if (!saw_start) fail("missing 'start' header");
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void next() { ++pos_; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur().line, cur().col, msg);
  }
  bool is_sym(const std::string& s) const {
    return cur().kind == Token::Sym && cur().text == s;
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    next();
  }
  // An identifier opens a new rule (or header) when followed by '->'.
  bool starts_rule() const {
    return cur().kind == Token::Ident &&
           (ahead(1).kind == Token::Sym && ahead(1).text == "->");
  }

  Rational parse_rational() {
    if (cur().kind != Token::Number) fail("expected a number");
    Rational num{Int(cur().text)};
    next();
    if (is_sym("/")) {
      next();
      if (cur().kind != Token::Number) fail("expected denominator");
      Int den(cur().text);
      if (den == 0) fail("zero denominator");
      next();
      Rational r = num;
      r /= Rational(den);
      return r;
    }
    return num;
  }

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    while (is_sym("+") || is_sym("-")) {
      bool plus = cur().text == "+";
      next();
      Polynomial rhs = parse_term();
      acc = plus ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (is_sym("*") || is_sym("/")) {
      bool mul = cur().text == "*";
      const Token& at = cur();
      next();
      Polynomial rhs = parse_factor();
      if (mul) {
        acc = acc * rhs;
      } else {
        if (!rhs.is_constant() || rhs.constant_value() == 0)
          throw ParseError(at.line, at.col, "division requires a nonzero constant divisor");
        acc = acc * (Rational(1) / rhs.constant_value());
      }
    }
    return acc;
  }

  Polynomial parse_factor() {
    Polynomial base = parse_primary();
    if (is_sym("^")) {
      next();
      if (cur().kind != Token::Number) fail("expected integer exponent");
      int e = std::stoi(cur().text);
      next();
      return base.pow(e);
    }
    return base;
  }

  Polynomial parse_primary() {
    if (is_sym("-")) {
      next();
      return -parse_primary();
    }
    if (is_sym("(")) {
      next();
      Polynomial e = parse_expr();
      expect_sym(")");
      return e;
    }
    if (cur().kind == Token::Number) {
      Polynomial c = Polynomial::constant(Rational(Int(cur().text)));
      next();
      return c;
    }
    if (cur().kind == Token::Ident) {
      Polynomial v = Polynomial::variable(cur().text);
      next();
      return v;
    }
    fail("expected expression");
  }

  Rational parse_const_arg(const char* what) {
    const Token& at = cur();
    Polynomial e = parse_expr();
    if (!e.is_constant())
      throw ParseError(at.line, at.col, std::string(what) + " must be constant");
    return e.constant_value();
  }

  UpdateRhs parse_rhs() {
    if (cur().kind == Token::Ident && ahead(1).kind == Token::Sym &&
        ahead(1).text == "(") {
      const std::string& kw = cur().text;
      if (kw == "UNIF" || kw == "GEO" || kw == "BERN" || kw == "BINOM" || kw == "HYPER") {
        next();
        expect_sym("(");
        Distribution d;
        if (kw == "UNIF") {
          Polynomial a = parse_expr();
          expect_sym(",");
          Polynomial b = parse_expr();
          d = Distribution::uniform(a, b);
        } else if (kw == "GEO") {
          d = Distribution::geometric(parse_const_arg("success probability"));
        } else if (kw == "BERN") {
          d = Distribution::bernoulli(parse_const_arg("success probability"));
        } else if (kw == "BINOM") {
          Polynomial n = parse_expr();
          expect_sym(",");
          d = Distribution::binomial(n, parse_const_arg("success probability"));
        } else {
          Polynomial N = parse_expr();
          expect_sym(",");
          Polynomial K = parse_expr();
          expect_sym(",");
          Polynomial n = parse_expr();
          d = Distribution::hypergeometric(N, K, n);
        }
        expect_sym(")");
        return UpdateRhs::of(d);
      }
    }
    return UpdateRhs::of(parse_expr());
  }

  Transition parse_branch(const PIP& p, int& next_tid) {
    Transition t;
    t.id = next_tid++;
    t.probability = Rational(1);
    if (cur().kind == Token::Number) {
      t.probability = parse_rational();
      expect_sym(":");
    }
    if (cur().kind != Token::Ident) fail("expected target location");
    t.target = cur().text;
    next();
    if (is_sym("(")) {
      next();
      while (!is_sym(")")) {
        if (cur().kind != Token::Ident) fail("expected variable to update");
        Var x = cur().text;
        const Token& at = cur();
        if (!p.is_pvar(x))
          throw ParseError(at.line, at.col, "update assigns undeclared variable " + x);
        next();
        expect_sym("=");
        if (t.update.count(x))
          throw ParseError(at.line, at.col, "variable " + x + " updated twice");
        t.update[x] = parse_rhs();
        if (is_sym(","))
          next();
        else if (!is_sym(")"))
          fail("expected ',' or ')'");
      }
      next();
    }
    return t;
  }

  GeneralTransition parse_rule(const PIP& p, int& next_tid) {
    GeneralTransition g;
    const Token& head = cur();
    g.source = cur().text;
    next();
    expect_sym("->");
    g.members.push_back(parse_branch(p, next_tid));
    while (is_sym("(+)")) {
      next();
      g.members.push_back(parse_branch(p, next_tid));
    }
    if (is_sym(":|:")) {
      next();
      while (true) {
        Polynomial lhs = parse_expr();
        CmpOp op;
        if (is_sym("<"))
          op = CmpOp::Lt;
        else if (is_sym("<="))
          op = CmpOp::Le;
        else if (is_sym(">"))
          op = CmpOp::Gt;
        else if (is_sym(">="))
          op = CmpOp::Ge;
        else if (is_sym("==") || is_sym("="))
          op = CmpOp::Eq;
        else
          fail("expected comparison operator");
        next();
        Polynomial rhs = parse_expr();
        g.guard.add(lhs, op, rhs);
        if (is_sym("&&"))
          next();
        else
          break;
      }
    }
    if (is_sym("{")) {
      next();
      const Token& at = cur();
      g.cost = parse_rational();
      if (g.cost < 0) throw ParseError(at.line, at.col, "negative cost");
      expect_sym("}");
    }
    Rational psum{0};
    for (const auto& t : g.members) psum += t.probability;
    if (psum != 1)
      throw ParseError(head.line, head.col,
                       "rule probabilities sum to " + rat_str(psum));
    return g;
  }
};

}  // namespace detail

inline PIP parse_pip(const std::string& text) {
  detail::RuleParser rp(detail::lex(text));
  return rp.run();
}

inline PIP parse_pip_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pip(ss.str());
}

}  // namespace pipbound
