#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"

namespace expsys {

/// Polynomial in x with exact rational coefficients, lowest degree first.
/// The coefficient vector never ends in a zero.
class polynomial {
 public:
  polynomial() = default;
  explicit polynomial(std::vector<rational> coefficients) : c_(std::move(coefficients)) { normalize(); }
  polynomial(const rational& constant) : c_{constant} { normalize(); }  // NOLINT(implicit)

  static polynomial x() { return polynomial(std::vector<rational>{0, 1}); }
  static polynomial monomial(std::size_t k, const rational& a = 1) {
    std::vector<rational> c(k + 1);
    c[k] = a;
    return polynomial(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  const std::vector<rational>& coefficients() const noexcept { return c_; }
  rational coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : rational(0); }
  rational leading() const { return c_.empty() ? rational(0) : c_.back(); }

  rational operator()(const rational& x) const {
    rational acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  double approx(double x) const {
    double acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k].get_d();
    return acc;
  }

  polynomial operator-() const {
    polynomial r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
  }

  friend polynomial operator+(const polynomial& a, const polynomial& b) {
    std::vector<rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coefficient(k) + b.coefficient(k);
    return polynomial(std::move(c));
  }

  friend polynomial operator-(const polynomial& a, const polynomial& b) { return a + (-b); }

  friend polynomial operator*(const polynomial& a, const polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return polynomial(std::move(c));
  }

  friend bool operator==(const polynomial&, const polynomial&) = default;

  /// p(a x + b) by Horner's scheme.
  polynomial compose_affine(const rational& a, const rational& b) const {
    const polynomial inner(std::vector<rational>{b, a});
    polynomial acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * inner + polynomial(c_[k]);
    return acc;
  }

  polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
    return polynomial(std::move(d));
  }

  /// (p(x) - p(0)) / x.
  polynomial drop_constant() const {
    if (c_.size() <= 1) return {};
    return polynomial(std::vector<rational>(c_.begin() + 1, c_.end()));
  }

  polynomial times_x() const {
    if (is_zero()) return {};
    std::vector<rational> c(1);
    c.insert(c.end(), c_.begin(), c_.end());
    return polynomial(std::move(c));
  }

  /// Quotient and remainder; throws on a zero divisor.
  friend std::pair<polynomial, polynomial> divmod(const polynomial& a, const polynomial& b) {
    if (b.is_zero()) throw domain_error("polynomial division by zero");
    std::vector<rational> r = a.c_;
    if (r.size() < b.c_.size()) return {polynomial(), a};
    std::vector<rational> q(r.size() - b.c_.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
      q[k] = r[k + b.c_.size() - 1] / b.c_.back();
      if (q[k] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[k + j] -= q[k] * b.c_[j];
    }
    return {polynomial(std::move(q)), polynomial(std::move(r))};
  }

  /// Scaled to leading coefficient 1 (zero stays zero).
  polynomial monic() const {
    if (is_zero()) return {};
    polynomial r = *this;
    const rational lead = c_.back();
    for (auto& a : r.c_) a /= lead;
    return r;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<rational> c_;
};

inline polynomial gcd(polynomial a, polynomial b) {
  while (!b.is_zero()) {
    polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// y(x+1) - y(x).
inline polynomial forward_difference(const polynomial& y) { return y.compose_affine(1, 1) - y; }
/// y(x) - y(x-1).
inline polynomial backward_difference(const polynomial& y) { return y - y.compose_affine(1, -1); }

/// binom(x, k) = x(x-1)...(x-k+1)/k!.
inline polynomial falling_basis(std::size_t k) {
  polynomial p(rational(1));
  for (std::size_t j = 0; j < k; ++j) {
    p = p * polynomial(std::vector<rational>{rational(-static_cast<long>(j)), rational(1)});
    p = p * polynomial(rational(1, static_cast<long>(j + 1)));
  }
  return p;
}

/// x(x+1)...(x+k-1)/k!.
inline polynomial rising_basis(std::size_t k) {
  polynomial p(rational(1));
  for (std::size_t j = 0; j < k; ++j) {
    p = p * polynomial(std::vector<rational>{rational(static_cast<long>(j)), rational(1)});
    p = p * polynomial(rational(1, static_cast<long>(j + 1)));
  }
  return p;
}

inline std::string to_string(const polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
    const rational& a = p.coefficients()[k];
    if (a == 0) continue;
    const bool negative = a < 0;
    const rational mag = abs(a);
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << "x";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

// ---- real roots on [0,1] ----

/// Sturm sequence of a squarefree polynomial.
inline std::vector<polynomial> sturm_sequence(const polynomial& p) {
  std::vector<polynomial> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    polynomial r = -divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(std::move(r));
  }
  return seq;
}

inline int sign_changes(const std::vector<polynomial>& seq, const rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : seq) {
    const int s = sgn(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Yun's factorisation: p = c * prod_i a_i^i with squarefree, coprime a_i.
/// Returns (a_1, a_2, ...).
inline std::vector<polynomial> squarefree_factors(const polynomial& p) {
  std::vector<polynomial> factors;
  if (p.degree() <= 0) return factors;
  const polynomial dp = p.derivative();
  polynomial a = gcd(p, dp);
  polynomial b = divmod(p, a).first;
  polynomial c = divmod(dp, a).first;
  polynomial d = c - b.derivative();
  while (b.degree() > 0) {
    a = gcd(b, d);
    factors.push_back(a.monic());
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = c - b.derivative();
  }
  return factors;
}

/// Distinct roots of p in the open interval (lo, hi); p must be nonzero.
inline int count_roots_open(polynomial p, const rational& lo, const rational& hi) {
  if (p.is_zero()) throw domain_error("root count of the zero polynomial");
  p = divmod(p, gcd(p, p.derivative())).first;
  // Remove roots at the endpoints so Sturm's count is over the open interval.
  for (const rational& e : {lo, hi}) {
    if (p.degree() > 0 && p(e) == 0) p = divmod(p, polynomial(std::vector<rational>{-e, rational(1)})).first;
  }
  if (p.degree() <= 0) return 0;
  const auto seq = sturm_sequence(p);
  return sign_changes(seq, lo) - sign_changes(seq, hi);
}

/// Exact decision of q >= 0 on [0,1].
inline bool nonnegative_on_unit_interval(const polynomial& q) {
  if (q.is_zero()) return true;
  if (q(0) < 0 || q(1) < 0) return false;
  // q can change sign only at roots of odd multiplicity.
  polynomial odd(rational(1));
  const auto factors = squarefree_factors(q);
  for (std::size_t i = 0; i < factors.size(); i += 2) odd = odd * factors[i];
  if (odd.degree() > 0 && count_roots_open(odd, 0, 1) > 0) return false;
  // Constant sign on (0,1): read it off at a point that is not a root.
  for (long den = 2;; ++den) {
    const rational t(1, den);
    const rational v = q(t);
    if (v != 0) return v > 0;
  }
}

/// Exact decision of max |p| <= bound on [0,1].
inline bool sup_norm_at_most(const polynomial& p, const rational& bound) {
  return nonnegative_on_unit_interval(polynomial(bound) - p) && nonnegative_on_unit_interval(polynomial(bound) + p);
}

/// Isolating intervals [a,b] (width <= eps) of the distinct roots of p in (0,1).
inline std::vector<std::pair<rational, rational>> isolate_roots_unit(const polynomial& p, const rational& eps) {
  std::vector<std::pair<rational, rational>> out;
  if (p.is_zero()) return out;
  polynomial q = divmod(p, gcd(p, p.derivative())).first;
  if (q.degree() <= 0) return out;
  const auto seq = sturm_sequence(q);
  std::vector<std::pair<rational, rational>> work{{rational(0), rational(1)}};
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    // Roots in (a, b].
    const int n = sign_changes(seq, a) - sign_changes(seq, b);
    if (n == 0) continue;
    if (n == 1 && b - a <= eps) {
      if (b != 1 || q(b) != 0) out.emplace_back(a, b);
      continue;
    }
    const rational m = (a + b) / 2;
    work.emplace_back(a, m);
    work.emplace_back(m, b);
  }
  return out;
}

/// max |p| on [0,1], from endpoint values and refined critical points.
inline double sup_norm_approx(const polynomial& p) {
  double best = std::max(std::fabs(p(0).get_d()), std::fabs(p(1).get_d()));
  const rational eps(1, 1L << 50);
  for (const auto& [a, b] : isolate_roots_unit(p.derivative(), eps)) {
    best = std::max(best, std::fabs(p((a + b) / 2).get_d()));
  }
  return best;
}

}  // namespace expsys
