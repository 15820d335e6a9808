#pragma once

#include <cctype>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/real/certified_real.hpp"
#include "expsys/series/polynomial.hpp"
#include "expsys/series/power_series.hpp"
#include "expsys/series/trig_polynomial.hpp"

// Input expressions for the command line. One LL(1) grammar, evaluated in
// the element context the chosen system needs:
//
//   input   := expr [ "at" expr ] EOF
//   expr    := term { ("+" | "-") term }
//   term    := factor { ("*" | "/") factor | factor }      juxtaposition multiplies
//   factor  := ("-" | "+") factor | power
//   power   := primary [ "^" factor ]
//   primary := NUMBER | IDENT [ "(" expr { "," expr } ")" | primary ]
//            | "(" expr ")" | "[" expr { "," expr } "]"
//
// A function name with no argument applies to x ("exp", "tan x").

namespace expsys {

enum class expr_context { scalar, series, polynomial, trig, index };

inline std::string to_string(expr_context c) {
  switch (c) {
    case expr_context::scalar: return "scalar";
    case expr_context::series: return "series";
    case expr_context::polynomial: return "polynomial";
    case expr_context::trig: return "trig";
    case expr_context::index: return "index";
  }
  return "?";
}

struct expr_node {
  enum class kind { number, symbol, negate, add, sub, mul, div, pow, call, list };
  kind k = kind::number;
  rational value;
  std::string name;
  std::vector<expr_node> args;
  std::size_t pos = 0;
};

struct parsed_expression {
  expr_node root;
  std::optional<expr_node> at;
  std::string text;
};

namespace detail {

struct token {
  enum class type { number, ident, symbol, end };
  type t = type::end;
  std::string text;
  rational value;
  std::size_t pos = 0;
};

inline std::vector<token> tokenize(const std::string& s) {
  std::vector<token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    token tk;
    tk.pos = i;
    if (std::isdigit(static_cast<unsigned char>(ch)) || (ch == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::string digits;
      long scale = 0;
      bool point = false;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || (s[i] == '.' && !point))) {
        if (s[i] == '.') {
          point = true;
        } else {
          digits += s[i];
          if (point) ++scale;
        }
        ++i;
      }
      tk.t = token::type::number;
      tk.text = s.substr(tk.pos, i - tk.pos);
      tk.value = parse_rational(digits) / pow(rational(10), scale);
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      tk.t = token::type::ident;
      tk.text = s.substr(tk.pos, i - tk.pos);
    } else if (std::string("+-*/^()[],").find(ch) != std::string::npos) {
      tk.t = token::type::symbol;
      tk.text = std::string(1, ch);
      ++i;
    } else {
      throw parse_error(std::string("unexpected character '") + ch + "'", i);
    }
    out.push_back(std::move(tk));
  }
  token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

class parser {
 public:
  explicit parser(const std::string& text) : toks_(tokenize(text)) {}

  parsed_expression parse_input(std::string text) {
    parsed_expression p;
    p.root = expr();
    if (peek_ident("at")) {
      next();
      p.at = expr();
    }
    if (cur().t != token::type::end) throw parse_error("unexpected '" + cur().text + "'", cur().pos);
    p.text = std::move(text);
    return p;
  }

 private:
  const token& cur() const { return toks_[i_]; }
  const token& next() { return toks_[i_++]; }
  bool peek_symbol(const char* s) const { return cur().t == token::type::symbol && cur().text == s; }
  bool peek_ident(const char* s) const { return cur().t == token::type::ident && cur().text == s; }

  void expect(const char* s) {
    if (!peek_symbol(s)) {
      throw parse_error(std::string("expected '") + s + "'" +
                            (cur().t == token::type::end ? std::string(" before end of input") : ", found '" + cur().text + "'"),
                        cur().pos);
    }
    next();
  }

  /// FIRST(primary), excluding the keyword "at".
  bool starts_primary() const {
    if (cur().t == token::type::number) return true;
    if (cur().t == token::type::ident) return cur().text != "at";
    return peek_symbol("(") || peek_symbol("[");
  }

  static expr_node binary(expr_node::kind k, expr_node a, expr_node b, std::size_t pos) {
    expr_node n;
    n.k = k;
    n.pos = pos;
    n.args.push_back(std::move(a));
    n.args.push_back(std::move(b));
    return n;
  }

  expr_node expr() {
    expr_node left = term();
    while (peek_symbol("+") || peek_symbol("-")) {
      const token op = next();
      left = binary(op.text == "+" ? expr_node::kind::add : expr_node::kind::sub, std::move(left), term(), op.pos);
    }
    return left;
  }

  expr_node term() {
    expr_node left = factor();
    while (true) {
      if (peek_symbol("*") || peek_symbol("/")) {
        const token op = next();
        left = binary(op.text == "*" ? expr_node::kind::mul : expr_node::kind::div, std::move(left), factor(), op.pos);
      } else if (starts_primary()) {
        const std::size_t pos = cur().pos;
        left = binary(expr_node::kind::mul, std::move(left), factor(), pos);
      } else {
        return left;
      }
    }
  }

  expr_node factor() {
    if (peek_symbol("-")) {
      const token op = next();
      expr_node n;
      n.k = expr_node::kind::negate;
      n.pos = op.pos;
      n.args.push_back(factor());
      return n;
    }
    if (peek_symbol("+")) {
      next();
      return factor();
    }
    return power();
  }

  expr_node power() {
    expr_node base = primary();
    if (peek_symbol("^")) {
      const token op = next();
      return binary(expr_node::kind::pow, std::move(base), factor(), op.pos);
    }
    return base;
  }

  expr_node primary() {
    const token& tk = cur();
    expr_node n;
    n.pos = tk.pos;
    switch (tk.t) {
      case token::type::number:
        n.k = expr_node::kind::number;
        n.value = next().value;
        return n;
      case token::type::ident: {
        n.name = next().text;
        if (is_function(n.name)) {
          n.k = expr_node::kind::call;
          if (peek_symbol("(")) {
            next();
            n.args.push_back(expr());
            while (peek_symbol(",")) {
              next();
              n.args.push_back(expr());
            }
            expect(")");
          } else if (starts_primary()) {
            n.args.push_back(primary());
          }
          return n;
        }
        n.k = expr_node::kind::symbol;
        return n;
      }
      case token::type::symbol:
        if (tk.text == "(") {
          next();
          expr_node inner = expr();
          expect(")");
          return inner;
        }
        if (tk.text == "[") {
          next();
          n.k = expr_node::kind::list;
          n.args.push_back(expr());
          while (peek_symbol(",")) {
            next();
            n.args.push_back(expr());
          }
          expect("]");
          return n;
        }
        throw parse_error("unexpected '" + tk.text + "'", tk.pos);
      case token::type::end: throw parse_error("unexpected end of input", tk.pos);
    }
    throw parse_error("unexpected token", tk.pos);
  }

 public:
  static bool is_function(const std::string& name) {
    static const std::vector<std::string> names = {"exp", "log", "sqrt", "pow", "sin", "cos", "tan", "cosh"};
    for (const auto& f : names) {
      if (f == name) return true;
    }
    return false;
  }

 private:
  std::vector<token> toks_;
  std::size_t i_ = 0;
};

/// Exact q^(a) when it is rational, e.g. 4^(3/2) = 8.
inline std::optional<rational> exact_rational_power(const rational& q, const rational& a) {
  const integer& p = a.get_num();
  const integer& r = a.get_den();
  if (!r.fits_ulong_p() || !p.fits_slong_p()) return std::nullopt;
  const unsigned long root = r.get_ui();
  auto exact_root = [root](const integer& z) -> std::optional<integer> {
    if (z < 0 && root % 2 == 0) return std::nullopt;
    integer out;
    if (mpz_root(out.get_mpz_t(), z.get_mpz_t(), root) == 0) return std::nullopt;
    return out;
  };
  if (q == 0) {
    if (a <= 0) throw domain_error("0 to a non-positive power");
    return rational(0);
  }
  const auto n = exact_root(q.get_num());
  const auto d = exact_root(q.get_den());
  if (!n || !d) return std::nullopt;
  return pow(rational(*n) / rational(*d), p.get_si());
}

}  // namespace detail

inline parsed_expression parse_expression_text(const std::string& text) {
  return detail::parser(text).parse_input(text);
}

struct expr_options {
  expr_context context = expr_context::scalar;
  std::size_t series_order = 64;
  /// Base point for series when the text has no "at" clause.
  rational base_point = 0;
  long bits = 256;
};

using element_value = std::variant<rational, certified_real, power_series, polynomial, trig_polynomial>;

namespace detail {

[[noreturn]] inline void unsupported(const expr_node& n, const std::string& what, expr_context c) {
  throw unsupported_in_context(what + " is not available in " + to_string(c) + " context (position " +
                               std::to_string(n.pos) + ")");
}

/// Exact rational value of a constant subexpression, or nullopt.
inline std::optional<rational> try_exact(const expr_node& n) {
  using K = expr_node::kind;
  switch (n.k) {
    case K::number: return n.value;
    case K::negate: {
      auto a = try_exact(n.args[0]);
      if (!a) return std::nullopt;
      return rational(-*a);
    }
    case K::add:
    case K::sub:
    case K::mul:
    case K::div:
    case K::pow: {
      auto a = try_exact(n.args[0]);
      auto b = try_exact(n.args[1]);
      if (!a || !b) return std::nullopt;
      if (n.k == K::add) return rational(*a + *b);
      if (n.k == K::sub) return rational(*a - *b);
      if (n.k == K::mul) return rational(*a * *b);
      if (n.k == K::div) {
        if (*b == 0) throw domain_error("division by zero at position " + std::to_string(n.pos));
        return rational(*a / *b);
      }
      return exact_rational_power(*a, *b);
    }
    case K::call:
      if (n.name == "sqrt" && n.args.size() == 1) {
        auto a = try_exact(n.args[0]);
        if (!a) return std::nullopt;
        if (*a < 0) throw domain_error("sqrt of a negative number at position " + std::to_string(n.pos));
        return exact_rational_power(*a, rational(1, 2));
      }
      if (n.name == "pow" && n.args.size() == 2) {
        auto a = try_exact(n.args[0]);
        auto b = try_exact(n.args[1]);
        if (!a || !b) return std::nullopt;
        return exact_rational_power(*a, *b);
      }
      return std::nullopt;
    default: return std::nullopt;
  }
}

inline rational require_exact(const expr_node& n, const std::string& what) {
  auto v = try_exact(n);
  if (!v) throw unsupported_in_context(what + " must be an exact rational (position " + std::to_string(n.pos) + ")");
  return *v;
}

inline certified_real eval_real(const expr_node& n, long bits) {
  using K = expr_node::kind;
  if (auto q = try_exact(n)) return certified_real(*q, bits);
  switch (n.k) {
    case K::symbol:
      if (n.name == "pi") return certified_real::pi(bits);
      if (n.name == "e") return certified_real::e(bits);
      unsupported(n, "'" + n.name + "'", expr_context::scalar);
    case K::negate: return -eval_real(n.args[0], bits);
    case K::add: return eval_real(n.args[0], bits) + eval_real(n.args[1], bits);
    case K::sub: return eval_real(n.args[0], bits) - eval_real(n.args[1], bits);
    case K::mul: return eval_real(n.args[0], bits) * eval_real(n.args[1], bits);
    case K::div: return eval_real(n.args[0], bits) / eval_real(n.args[1], bits);
    case K::pow: {
      const certified_real base = eval_real(n.args[0], bits);
      const rational a = require_exact(n.args[1], "exponent");
      if (a.get_den() == 1 && a.get_num().fits_slong_p()) return base.pow(a.get_num().get_si());
      return (certified_real(a, bits) * base.log()).exp();
    }
    case K::call: {
      if (n.args.empty()) unsupported(n, n.name + " without an argument", expr_context::scalar);
      if (n.name == "pow") {
        if (n.args.size() != 2) unsupported(n, "pow(a) of x", expr_context::scalar);
        expr_node p;
        p.k = K::pow;
        p.pos = n.pos;
        p.args = n.args;
        return eval_real(p, bits);
      }
      if (n.args.size() != 1) throw domain_error(n.name + " takes one argument (position " + std::to_string(n.pos) + ")");
      const certified_real a = eval_real(n.args[0], bits);
      if (n.name == "exp") return a.exp();
      if (n.name == "log") return a.log();
      if (n.name == "sqrt") return a.sqrt();
      if (n.name == "cosh") return (a.exp() + (-a).exp()) / certified_real(rational(2), bits);
      unsupported(n, n.name, expr_context::scalar);
    }
    default: unsupported(n, "this expression", expr_context::scalar);
  }
}

struct series_env {
  rational x0;
  std::size_t order;
};

inline power_series series_power(const power_series& h, const rational& a, const expr_node& n) {
  if (a.get_den() == 1 && a.get_num().fits_slong_p()) {
    long k = a.get_num().get_si();
    power_series base = h;
    if (k < 0) {
      if (h.constant_term() == 0) throw domain_error("negative power of a series vanishing at the base point");
      base = h.reciprocal();
      k = -k;
    }
    power_series r = power_series::constant(1, h.base_point(), h.order());
    for (long j = 0; j < k; ++j) r = r * base;
    return r;
  }
  const rational c = h.constant_term();
  if (c <= 0) {
    throw domain_error("fractional power of a series with constant term " + to_string(c) + " (position " +
                       std::to_string(n.pos) + ")");
  }
  const auto cpow = exact_rational_power(c, a);
  if (!cpow) unsupported(n, to_string(c) + "^(" + to_string(a) + ")", expr_context::series);
  return *cpow * series_pow((1 / c) * h, a);
}

inline power_series eval_series(const expr_node& n, const series_env& env) {
  using K = expr_node::kind;
  auto constant = [&](const rational& q) { return power_series::constant(q, env.x0, env.order); };
  switch (n.k) {
    case K::number: return constant(n.value);
    case K::symbol:
      if (n.name == "x") return power_series::variable(env.x0, env.order);
      unsupported(n, "'" + n.name + "'", expr_context::series);
    case K::negate: return -eval_series(n.args[0], env);
    case K::add: return eval_series(n.args[0], env) + eval_series(n.args[1], env);
    case K::sub: return eval_series(n.args[0], env) - eval_series(n.args[1], env);
    case K::mul: return eval_series(n.args[0], env) * eval_series(n.args[1], env);
    case K::div: {
      const power_series b = eval_series(n.args[1], env);
      if (b.constant_term() == 0) {
        throw domain_error("division by a series vanishing at the base point (position " + std::to_string(n.pos) + ")");
      }
      return eval_series(n.args[0], env) / b;
    }
    case K::pow: return series_power(eval_series(n.args[0], env), require_exact(n.args[1], "exponent"), n);
    case K::list: {
      std::vector<rational> c;
      for (const auto& a : n.args) c.push_back(require_exact(a, "series coefficient"));
      return power_series(env.x0, std::move(c));
    }
    case K::call: {
      const power_series x = power_series::variable(env.x0, env.order);
      if (n.name == "pow") {
        if (n.args.size() == 1) return series_power(x, require_exact(n.args[0], "exponent"), n);
        if (n.args.size() == 2) return series_power(eval_series(n.args[0], env), require_exact(n.args[1], "exponent"), n);
        throw domain_error("pow takes one or two arguments (position " + std::to_string(n.pos) + ")");
      }
      if (n.args.size() > 1) throw domain_error(n.name + " takes one argument (position " + std::to_string(n.pos) + ")");
      const power_series h = n.args.empty() ? x : eval_series(n.args[0], env);
      const rational c = h.constant_term();
      if (n.name == "sqrt") return series_power(h, rational(1, 2), n);
      if (n.name == "exp") {
        if (c != 0) unsupported(n, "exp with constant term " + to_string(c), expr_context::series);
        return series_exp(h);
      }
      if (n.name == "log") {
        if (c != 1) unsupported(n, "log with constant term " + to_string(c), expr_context::series);
        return series_log(h);
      }
      if (n.name == "cosh") {
        if (c != 0) unsupported(n, "cosh with constant term " + to_string(c), expr_context::series);
        return rational(1, 2) * (series_exp(h) + series_exp(-h));
      }
      if (c != 0) unsupported(n, n.name + " with constant term " + to_string(c), expr_context::series);
      const auto [s, co] = series_sin_cos(h);
      if (n.name == "sin") return s;
      if (n.name == "cos") return co;
      return s / co;
    }
  }
  unsupported(n, "this expression", expr_context::series);
}

inline polynomial eval_polynomial(const expr_node& n) {
  using K = expr_node::kind;
  switch (n.k) {
    case K::number: return polynomial(n.value);
    case K::symbol:
      if (n.name == "x") return polynomial::x();
      unsupported(n, "'" + n.name + "'", expr_context::polynomial);
    case K::negate: return -eval_polynomial(n.args[0]);
    case K::add: return eval_polynomial(n.args[0]) + eval_polynomial(n.args[1]);
    case K::sub: return eval_polynomial(n.args[0]) - eval_polynomial(n.args[1]);
    case K::mul: return eval_polynomial(n.args[0]) * eval_polynomial(n.args[1]);
    case K::div: {
      const rational d = require_exact(n.args[1], "polynomial divisor");
      if (d == 0) throw domain_error("division by zero at position " + std::to_string(n.pos));
      return polynomial(1 / d) * eval_polynomial(n.args[0]);
    }
    case K::pow: {
      const rational a = require_exact(n.args[1], "exponent");
      if (a.get_den() != 1 || a < 0 || a > 4096) unsupported(n, "exponent " + to_string(a), expr_context::polynomial);
      const polynomial b = eval_polynomial(n.args[0]);
      polynomial r(rational(1));
      for (long j = 0; j < a.get_num().get_si(); ++j) r = r * b;
      return r;
    }
    case K::list: {
      std::vector<rational> c;
      for (const auto& a : n.args) c.push_back(require_exact(a, "polynomial coefficient"));
      return polynomial(std::move(c));
    }
    case K::call: unsupported(n, n.name, expr_context::polynomial);
  }
  unsupported(n, "this expression", expr_context::polynomial);
}

/// a + b x with complex rational a, b.
struct linear_form {
  complex_rational a;
  complex_rational b;
};

inline linear_form eval_linear(const expr_node& n) {
  using K = expr_node::kind;
  switch (n.k) {
    case K::number: return {n.value, {}};
    case K::symbol:
      if (n.name == "x") return {{}, rational(1)};
      if (n.name == "i") return {complex_rational(0, 1), {}};
      unsupported(n, "'" + n.name + "'", expr_context::trig);
    case K::negate: {
      const auto v = eval_linear(n.args[0]);
      return {-v.a, -v.b};
    }
    case K::add:
    case K::sub: {
      const auto u = eval_linear(n.args[0]);
      const auto v = eval_linear(n.args[1]);
      if (n.k == K::add) return {u.a + v.a, u.b + v.b};
      return {u.a - v.a, u.b - v.b};
    }
    case K::mul: {
      const auto u = eval_linear(n.args[0]);
      const auto v = eval_linear(n.args[1]);
      if (!u.b.is_zero() && !v.b.is_zero()) unsupported(n, "a product of two multiples of x", expr_context::trig);
      return {u.a * v.a, u.a * v.b + u.b * v.a};
    }
    case K::div: {
      const auto u = eval_linear(n.args[0]);
      const auto v = eval_linear(n.args[1]);
      if (!v.b.is_zero() || v.a.is_zero()) unsupported(n, "this divisor", expr_context::trig);
      return {u.a / v.a, u.b / v.a};
    }
    default: unsupported(n, "this argument", expr_context::trig);
  }
}

inline long integer_frequency(const complex_rational& k, const expr_node& n) {
  if (k.im != 0 || k.re.get_den() != 1 || !k.re.get_num().fits_slong_p()) {
    unsupported(n, "frequency " + to_string(k), expr_context::trig);
  }
  return k.re.get_num().get_si();
}

inline trig_polynomial eval_trig(const expr_node& n) {
  using K = expr_node::kind;
  switch (n.k) {
    case K::number: return trig_polynomial(complex_rational(n.value));
    case K::symbol:
      if (n.name == "i") return trig_polynomial(complex_rational(0, 1));
      unsupported(n, "'" + n.name + "' outside cos, sin or exp", expr_context::trig);
    case K::negate: return -eval_trig(n.args[0]);
    case K::add: return eval_trig(n.args[0]) + eval_trig(n.args[1]);
    case K::sub: return eval_trig(n.args[0]) - eval_trig(n.args[1]);
    case K::mul: return eval_trig(n.args[0]) * eval_trig(n.args[1]);
    case K::div: {
      const auto d = eval_linear(n.args[1]);
      if (!d.b.is_zero() || d.a.is_zero()) unsupported(n, "this divisor", expr_context::trig);
      return trig_polynomial(complex_rational(1) / d.a) * eval_trig(n.args[0]);
    }
    case K::pow: {
      const rational a = require_exact(n.args[1], "exponent");
      if (a.get_den() != 1 || a < 0 || a > 4096) unsupported(n, "exponent " + to_string(a), expr_context::trig);
      const trig_polynomial b = eval_trig(n.args[0]);
      trig_polynomial r(complex_rational(1));
      for (long j = 0; j < a.get_num().get_si(); ++j) r = r * b;
      return r;
    }
    case K::call: {
      if (n.args.size() > 1) throw domain_error(n.name + " takes one argument (position " + std::to_string(n.pos) + ")");
      linear_form arg{{}, rational(1)};
      if (!n.args.empty()) arg = eval_linear(n.args[0]);
      if (!arg.a.is_zero()) unsupported(n, n.name + " with a constant phase", expr_context::trig);
      if (n.name == "cos") return trig_polynomial::cosine(integer_frequency(arg.b, n));
      if (n.name == "sin") return trig_polynomial::sine(integer_frequency(arg.b, n));
      if (n.name == "exp") return trig_polynomial::exponential(integer_frequency(arg.b / complex_rational(0, 1), n));
      unsupported(n, n.name, expr_context::trig);
    }
    case K::list: unsupported(n, "a coefficient list", expr_context::trig);
  }
  unsupported(n, "this expression", expr_context::trig);
}

inline rational eval_index(const expr_node& n, std::size_t i) {
  using K = expr_node::kind;
  switch (n.k) {
    case K::number: return n.value;
    case K::symbol:
      if (n.name == "i") return rational(static_cast<long>(i));
      unsupported(n, "'" + n.name + "'", expr_context::index);
    case K::negate: return -eval_index(n.args[0], i);
    case K::add: return eval_index(n.args[0], i) + eval_index(n.args[1], i);
    case K::sub: return eval_index(n.args[0], i) - eval_index(n.args[1], i);
    case K::mul: return eval_index(n.args[0], i) * eval_index(n.args[1], i);
    case K::div: {
      const rational d = eval_index(n.args[1], i);
      if (d == 0) throw domain_error("division by zero at level " + std::to_string(i));
      return eval_index(n.args[0], i) / d;
    }
    case K::pow: {
      const rational a = eval_index(n.args[1], i);
      const auto r = exact_rational_power(eval_index(n.args[0], i), a);
      if (!r) unsupported(n, "an irrational power", expr_context::index);
      return *r;
    }
    default: unsupported(n, "this expression", expr_context::index);
  }
}

}  // namespace detail

/// Evaluates `text` as an element of the requested kind. Scalars stay exact
/// rationals when the expression allows it and become certified intervals
/// of `bits` bits otherwise.
inline element_value parse_expression(const std::string& text, const expr_options& opt) {
  const parsed_expression p = parse_expression_text(text);
  if (p.at && opt.context != expr_context::series) {
    throw unsupported_in_context("'at' is only meaningful for series (position " + std::to_string(p.at->pos) + ")");
  }
  switch (opt.context) {
    case expr_context::scalar:
      if (auto q = detail::try_exact(p.root)) return *q;
      return detail::eval_real(p.root, opt.bits);
    case expr_context::series: {
      const rational x0 = p.at ? detail::require_exact(*p.at, "base point") : opt.base_point;
      return detail::eval_series(p.root, {x0, opt.series_order});
    }
    case expr_context::polynomial: return detail::eval_polynomial(p.root);
    case expr_context::trig: return detail::eval_trig(p.root);
    case expr_context::index: break;
  }
  throw unsupported_in_context("index expressions are not elements");
}

/// f(i) for a level-index expression such as "1/(i+2)".
inline std::function<rational(std::size_t)> parse_index_expression(const std::string& text) {
  const parsed_expression p = parse_expression_text(text);
  if (p.at) throw unsupported_in_context("'at' in an index expression (position " + std::to_string(p.at->pos) + ")");
  return [root = p.root](std::size_t i) { return detail::eval_index(root, i); };
}

/// A complex number such as "0.3+0.4i", "-1.5i" or "2".
inline complex_rational parse_complex(const std::string& text) {
  const parsed_expression p = parse_expression_text(text);
  if (p.at) throw unsupported_in_context("'at' in a complex number");
  const auto v = detail::eval_linear(p.root);
  if (!v.b.is_zero()) throw unsupported_in_context("'x' in a complex number");
  return v.a;
}

}  // namespace expsys
