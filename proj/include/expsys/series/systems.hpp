#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/series/polynomial.hpp"
#include "expsys/series/power_series.hpp"
#include "expsys/series/trig_polynomial.hpp"

namespace expsys {

/// Taylor coefficients at x0: P y = y(x0), E y = (y - y(x0)) / (x - x0).
class taylor_system {
 public:
  using element_type = power_series;
  using coefficient_type = rational;

  explicit taylor_system(rational x0 = 0, std::size_t series_order = 64) : x0_(std::move(x0)), order_(series_order) {}

  std::string id() const { return "taylor"; }
  const rational& base_point() const noexcept { return x0_; }

  power_series neutral(std::size_t) const { return power_series::zero(x0_, order_); }
  bool is_neutral(std::size_t, const power_series& y) const { return y.is_zero(); }
  void validate(const power_series& y) const {
    if (y.base_point() != x0_) throw domain_error("series is not at the base point " + to_string(x0_));
  }

  rational project(std::size_t, const power_series& y) const { return y.constant_term(); }

  power_series expand(std::size_t, const power_series& y) const {
    if (y.order() == 0) throw truncation_inconclusive("expansion of a series of order 0");
    return power_series(y.base_point(), std::vector<rational>(y.coefficients().begin() + 1, y.coefficients().end()));
  }

  std::optional<power_series> reconstruct(std::size_t, const rational& c, const power_series& next) const {
    if (next.base_point() != x0_) return std::nullopt;
    power_series y = next.shifted_up(1) + c;
    return y.order() > order_ ? y.truncated(order_) : y;
  }

 private:
  rational x0_;
  std::size_t order_;
};

/// Newton forward differences: P y = y(0), E = forward difference.
class newton_forward_system {
 public:
  using element_type = polynomial;
  using coefficient_type = rational;

  std::string id() const { return "newton-forward"; }
  polynomial neutral(std::size_t) const { return {}; }
  bool is_neutral(std::size_t, const polynomial& y) const { return y.is_zero(); }
  rational project(std::size_t, const polynomial& y) const { return y(0); }
  polynomial expand(std::size_t, const polynomial& y) const { return forward_difference(y); }

  /// The unique y with y(0) = c and forward difference `next`.
  std::optional<polynomial> reconstruct(std::size_t, const rational& c, const polynomial& next) const {
    polynomial y(c);
    polynomial rest = next;
    for (std::size_t k = 0; !rest.is_zero(); ++k) {
      y = y + polynomial(rest(0)) * falling_basis(k + 1);
      rest = forward_difference(rest);
    }
    return y;
  }
};

/// Newton backward differences: P y = y(0), E = backward difference.
class newton_backward_system {
 public:
  using element_type = polynomial;
  using coefficient_type = rational;

  std::string id() const { return "newton-backward"; }
  polynomial neutral(std::size_t) const { return {}; }
  bool is_neutral(std::size_t, const polynomial& y) const { return y.is_zero(); }
  rational project(std::size_t, const polynomial& y) const { return y(0); }
  polynomial expand(std::size_t, const polynomial& y) const { return backward_difference(y); }

  /// The unique y with y(0) = c and backward difference `next`.
  std::optional<polynomial> reconstruct(std::size_t, const rational& c, const polynomial& next) const {
    polynomial y(c);
    polynomial rest = next;
    for (std::size_t k = 0; !rest.is_zero(); ++k) {
      y = y + polynomial(rest(0)) * rising_basis(k + 1);
      rest = backward_difference(rest);
    }
    return y;
  }
};

/// Sum_{k<n} c_k binom(x, k): the forward-difference convergent in closed form.
inline polynomial newton_forward_formula(const std::vector<rational>& code, std::size_t n) {
  polynomial y;
  for (std::size_t k = 0; k < n; ++k) y = y + polynomial(code.at(k)) * falling_basis(k);
  return y;
}

/// Sum_{k<n} c_k x(x+1)...(x+k-1)/k!: the backward-difference convergent.
inline polynomial newton_backward_formula(const std::vector<rational>& code, std::size_t n) {
  polynomial y;
  for (std::size_t k = 0; k < n; ++k) y = y + polynomial(code.at(k)) * rising_basis(k);
  return y;
}

/// Normalised Fourier modes (c_{-i}, c_{+i}).
struct fourier_pair {
  complex_rational minus;
  complex_rational plus;
  friend bool operator==(const fourier_pair&, const fourier_pair&) = default;
};

inline std::string to_string(const fourier_pair& p) {
  return "(" + to_string(p.minus) + "," + to_string(p.plus) + ")";
}

/// Fourier system on trigonometric polynomials. Level i reads and removes
/// the modes -i and +i; level 0 reads the single mode 0 twice.
class fourier_system {
 public:
  using element_type = trig_polynomial;
  using coefficient_type = fourier_pair;

  std::string id() const { return "fourier"; }
  trig_polynomial neutral(std::size_t) const { return {}; }
  bool is_neutral(std::size_t, const trig_polynomial& y) const { return y.is_zero(); }

  fourier_pair project(std::size_t i, const trig_polynomial& y) const {
    const long k = static_cast<long>(i);
    return {y.mode(-k), y.mode(k)};
  }

  trig_polynomial expand(std::size_t i, const trig_polynomial& y) const {
    const long k = static_cast<long>(i);
    trig_polynomial r = y;
    r.set(-k, complex_rational());
    r.set(k, complex_rational());
    return r;
  }

  std::optional<trig_polynomial> reconstruct(std::size_t i, const fourier_pair& c, const trig_polynomial& next) const {
    const long k = static_cast<long>(i);
    // next must lie in S_{i+1}: no modes with |j| <= i.
    const long low = next.lowest_mode();
    if (low >= 0 && low <= k) return std::nullopt;
    if (k == 0 && !(c.minus == c.plus)) return std::nullopt;
    trig_polynomial y = next;
    y.set(-k, c.minus);
    y.set(k, c.plus);
    return y;
  }
};

/// Taylor system on polynomials over [0,1], with every S_i cut down to the
/// elements whose whole trajectory stays in the unit ball of the sup norm.
class norm_restricted_taylor_fixture {
 public:
  using element_type = polynomial;
  using coefficient_type = rational;

  std::string id() const { return "taylor-norm-fixture"; }
  polynomial neutral(std::size_t) const { return {}; }
  bool is_neutral(std::size_t, const polynomial& y) const { return y.is_zero(); }

  void validate(const polynomial& y) const {
    if (!in_restricted_space(y)) throw domain_error("trajectory of " + to_string(y) + " leaves the unit ball");
  }

  rational project(std::size_t, const polynomial& y) const { return y(0); }
  polynomial expand(std::size_t, const polynomial& y) const { return y.drop_constant(); }

  std::optional<polynomial> reconstruct(std::size_t, const rational& c, const polynomial& next) const {
    polynomial candidate = polynomial(c) + next.times_x();
    if (!in_restricted_space(candidate)) return std::nullopt;
    return candidate;
  }

  /// ||y_j|| <= 1 on [0,1] for every stage j of the trajectory of y.
  static bool in_restricted_space(polynomial y) {
    while (true) {
      if (!sup_norm_at_most(y, 1)) return false;
      if (y.is_zero()) return true;
      y = y.drop_constant();
    }
  }
};

}  // namespace expsys
