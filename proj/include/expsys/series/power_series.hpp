#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"

namespace expsys {

/// Truncated power series sum_k a_k (x - x0)^k, known through order N.
class power_series {
 public:
  power_series() : coeffs_(1) {}

  power_series(rational base_point, std::vector<rational> coefficients)
      : x0_(std::move(base_point)), coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw domain_error("power series needs at least one coefficient");
  }

  static power_series constant(const rational& c, const rational& x0, std::size_t order) {
    std::vector<rational> a(order + 1);
    a[0] = c;
    return power_series(x0, std::move(a));
  }

  static power_series zero(const rational& x0, std::size_t order) { return constant(0, x0, order); }

  /// The identity function x = x0 + w.
  static power_series variable(const rational& x0, std::size_t order) {
    std::vector<rational> a(order + 1);
    a[0] = x0;
    if (order >= 1) a[1] = 1;
    return power_series(x0, std::move(a));
  }

  const rational& base_point() const noexcept { return x0_; }
  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  const std::vector<rational>& coefficients() const noexcept { return coeffs_; }
  const rational& operator[](std::size_t k) const { return coeffs_.at(k); }
  const rational& constant_term() const noexcept { return coeffs_.front(); }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const rational& a) { return a == 0; });
  }

  /// Index of the first nonzero stored coefficient; order()+1 when all vanish.
  std::size_t first_nonzero() const {
    std::size_t k = 0;
    while (k < coeffs_.size() && coeffs_[k] == 0) ++k;
    return k;
  }

  power_series truncated(std::size_t order) const {
    if (order > this->order()) throw truncation_inconclusive("cannot extend a series beyond its order");
    return power_series(x0_, std::vector<rational>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
  }

  /// Divides by (x - x0)^m; the first m coefficients must vanish.
  power_series shifted_down(std::size_t m) const {
    if (m > order()) throw truncation_inconclusive("dividing by w^" + std::to_string(m) + " exhausts a series of order " + std::to_string(order()));
    for (std::size_t k = 0; k < m; ++k) {
      if (coeffs_[k] != 0) throw domain_error("series is not divisible by w^" + std::to_string(m));
    }
    return power_series(x0_, std::vector<rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(m), coeffs_.end()));
  }

  /// Multiplies by (x - x0)^m.
  power_series shifted_up(std::size_t m) const {
    std::vector<rational> a(m);
    a.insert(a.end(), coeffs_.begin(), coeffs_.end());
    return power_series(x0_, std::move(a));
  }

  power_series derivative() const {
    if (order() == 0) throw truncation_inconclusive("derivative of a series of order 0");
    std::vector<rational> a(order());
    for (std::size_t k = 1; k <= order(); ++k) a[k - 1] = coeffs_[k] * static_cast<long>(k);
    return power_series(x0_, std::move(a));
  }

  /// Antiderivative with value `constant` at x0.
  power_series integral(const rational& constant = 0) const {
    std::vector<rational> a(order() + 2);
    a[0] = constant;
    for (std::size_t k = 0; k <= order(); ++k) a[k + 1] = coeffs_[k] / static_cast<long>(k + 1);
    return power_series(x0_, std::move(a));
  }

  /// Partial sum at w = x - x0.
  rational evaluate_offset(const rational& w) const {
    rational acc = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * w + coeffs_[k];
    return acc;
  }

  power_series operator-() const {
    power_series r = *this;
    for (auto& a : r.coeffs_) a = -a;
    return r;
  }

  friend power_series operator+(const power_series& a, const power_series& b) {
    const std::size_t n = common_order(a, b);
    std::vector<rational> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = a.coeffs_[k] + b.coeffs_[k];
    return power_series(a.x0_, std::move(c));
  }

  friend power_series operator-(const power_series& a, const power_series& b) { return a + (-b); }

  friend power_series operator*(const power_series& a, const power_series& b) {
    const std::size_t n = common_order(a, b);
    std::vector<rational> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; i + j <= n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return power_series(a.x0_, std::move(c));
  }

  friend power_series operator*(const rational& s, const power_series& a) {
    power_series r = a;
    for (auto& c : r.coeffs_) c *= s;
    return r;
  }

  friend power_series operator+(const power_series& a, const rational& s) {
    power_series r = a;
    r.coeffs_[0] += s;
    return r;
  }

  friend power_series operator/(const power_series& a, const power_series& b) { return a * b.reciprocal(); }

  power_series reciprocal() const {
    if (coeffs_[0] == 0) throw domain_error("reciprocal of a series with zero constant term");
    std::vector<rational> r(coeffs_.size());
    const rational inv = 1 / coeffs_[0];
    r[0] = inv;
    for (std::size_t k = 1; k < r.size(); ++k) {
      rational acc = 0;
      for (std::size_t j = 1; j <= k; ++j) acc += coeffs_[j] * r[k - j];
      r[k] = -acc * inv;
    }
    return power_series(x0_, std::move(r));
  }

  friend bool operator==(const power_series& a, const power_series& b) {
    return a.x0_ == b.x0_ && a.coeffs_ == b.coeffs_;
  }

  /// Agreement of the coefficients through order n.
  bool agrees_through(const power_series& other, std::size_t n) const {
    if (x0_ != other.x0_) return false;
    if (n > order() || n > other.order()) throw truncation_inconclusive("comparison beyond the stored order");
    return std::equal(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(n) + 1, other.coeffs_.begin());
  }

 private:
  static std::size_t common_order(const power_series& a, const power_series& b) {
    if (a.x0_ != b.x0_) throw domain_error("series at different base points " + to_string(a.x0_) + " and " + to_string(b.x0_));
    return std::min(a.order(), b.order());
  }

  rational x0_ = 0;
  std::vector<rational> coeffs_;
};

inline power_series series_mul(const power_series& a, const power_series& b) { return a * b; }
inline power_series series_differentiate(const power_series& y) { return y.derivative(); }
inline power_series series_integrate(const power_series& y, const rational& constant) { return y.integral(constant); }

inline power_series series_log(const power_series& h) {
  if (h.constant_term() != 1) throw domain_error("series_log needs constant term 1, got " + to_string(h.constant_term()));
  if (h.order() == 0) return power_series::zero(h.base_point(), 0);
  return (h.derivative() / h.truncated(h.order() - 1)).integral(0);
}

inline power_series series_exp(const power_series& s) {
  if (s.constant_term() != 0) throw domain_error("series_exp needs constant term 0, got " + to_string(s.constant_term()));
  const auto& a = s.coefficients();
  std::vector<rational> e(a.size());
  e[0] = 1;
  for (std::size_t k = 1; k < e.size(); ++k) {
    rational acc = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      if (a[j] != 0) acc += static_cast<long>(j) * a[j] * e[k - j];
    }
    e[k] = acc / static_cast<long>(k);
  }
  return power_series(s.base_point(), std::move(e));
}

/// h^alpha = exp(alpha log h), principal branch at a constant term of 1.
inline power_series series_pow(const power_series& h, const rational& alpha) {
  if (h.constant_term() != 1) throw domain_error("series_pow needs constant term 1, got " + to_string(h.constant_term()));
  return series_exp(alpha * series_log(h));
}

/// sin and cos of s, s(x0) = 0, from s' cos and -s' sin.
inline std::pair<power_series, power_series> series_sin_cos(const power_series& s) {
  if (s.constant_term() != 0) throw domain_error("sin/cos of a series need constant term 0");
  const std::size_t n = s.order();
  std::vector<rational> sn(n + 1);
  std::vector<rational> cs(n + 1);
  cs[0] = 1;
  const auto& a = s.coefficients();
  for (std::size_t k = 1; k <= n; ++k) {
    rational ds = 0;
    rational dc = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      if (a[j] == 0) continue;
      ds += static_cast<long>(j) * a[j] * cs[k - j];
      dc -= static_cast<long>(j) * a[j] * sn[k - j];
    }
    sn[k] = ds / static_cast<long>(k);
    cs[k] = dc / static_cast<long>(k);
  }
  return {power_series(s.base_point(), std::move(sn)), power_series(s.base_point(), std::move(cs))};
}

inline std::string to_string(const power_series& y) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < y.coefficients().size(); ++k) {
    if (k != 0) os << ",";
    os << y.coefficients()[k].get_str();
  }
  os << "]";
  if (y.base_point() != 0) os << " at " << y.base_point().get_str();
  return os.str();
}

}  // namespace expsys
