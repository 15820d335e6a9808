#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/real/real_ops.hpp"

namespace expsys {

/// Radix-b digits of y in [0,1).
template <class R = rational>
class base_system {
 public:
  using element_type = R;
  using coefficient_type = integer;

  explicit base_system(long base = 10, real_backend<R> backend = {}) : base_(base), be_(std::move(backend)) {
    if (base < 2) throw domain_error("radix must be at least 2, got " + std::to_string(base));
  }

  std::string id() const { return base_ == 10 ? "decimal" : "base" + std::to_string(base_); }
  long radix() const noexcept { return base_; }
  const real_backend<R>& backend() const noexcept { return be_; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const { require_unit_interval(be_, y); }

  integer project(std::size_t, const R& y) const { return be_.floor(y * be_.lift(base_)); }

  R expand(std::size_t, const R& y) const {
    R scaled = y * be_.lift(base_);
    return scaled - be_.lift(rational(be_.floor(scaled)));
  }

  std::optional<R> reconstruct(std::size_t, const integer& c, const R& next) const {
    if (c < 0 || c >= base_ || !in_unit_interval(be_, next)) return std::nullopt;
    return (be_.lift(rational(c)) + next) / be_.lift(base_);
  }

 private:
  long base_;
  real_backend<R> be_;
};

/// Regular continued fraction y = 1/(c_0 + 1/(c_1 + ...)) on [0,1).
template <class R = rational>
class continued_fraction_system {
 public:
  using element_type = R;
  using coefficient_type = extended_integer;

  explicit continued_fraction_system(real_backend<R> backend = {}) : be_(std::move(backend)) {}

  std::string id() const { return "cf"; }
  const real_backend<R>& backend() const noexcept { return be_; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const { require_unit_interval(be_, y); }

  extended_integer project(std::size_t, const R& y) const {
    if (be_.is_zero(y)) return extended_integer::positive_infinity();
    return be_.floor(be_.lift(1) / y);
  }

  R expand(std::size_t, const R& y) const {
    if (be_.is_zero(y)) return y;
    R inv = be_.lift(1) / y;
    return inv - be_.lift(rational(be_.floor(inv)));
  }

  std::optional<R> reconstruct(std::size_t, const extended_integer& c, const R& next) const {
    if (!c.is_finite()) {
      if (c.classification() == extended_integer::kind::positive_infinity && be_.is_zero(next)) return be_.lift(0);
      return std::nullopt;
    }
    if (c.value() < 1 || !in_unit_interval(be_, next)) return std::nullopt;
    // (1, 0) would reconstruct 1, which is not in [0,1).
    if (c.value() == 1 && be_.is_zero(next)) return std::nullopt;
    return be_.lift(1) / (be_.lift(rational(c.value())) + next);
  }

 private:
  real_backend<R> be_;
};

/// Greedy Egyptian fraction y = 1/c_0 + 1/c_1 + ...
template <class R = rational>
class egyptian_system {
 public:
  using element_type = R;
  using coefficient_type = extended_integer;
  /// F_i is increasing once the coefficient order is reversed.
  static constexpr bool reversed_coefficient_order = true;

  explicit egyptian_system(real_backend<R> backend = {}) : be_(std::move(backend)) {}

  std::string id() const { return "egyptian"; }
  const real_backend<R>& backend() const noexcept { return be_; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const { require_unit_interval(be_, y); }

  extended_integer project(std::size_t, const R& y) const {
    if (be_.is_zero(y)) return extended_integer::positive_infinity();
    return be_.ceil(be_.lift(1) / y);
  }

  R expand(std::size_t i, const R& y) const {
    if (be_.is_zero(y)) return y;
    return y - be_.lift(rational(1) / rational(project(i, y).value()));
  }

  std::optional<R> reconstruct(std::size_t, const extended_integer& c, const R& next) const {
    if (!c.is_finite()) {
      if (c.classification() == extended_integer::kind::positive_infinity && be_.is_zero(next)) return be_.lift(0);
      return std::nullopt;
    }
    const integer& k = c.value();
    if (k < 2 || be_.sign(next) < 0) return std::nullopt;
    // Image of F: 0 <= y' < 1/(k(k-1)).
    if (be_.compare(next, rational(integer(1), integer(k * (k - 1)))) >= 0) return std::nullopt;
    return be_.lift(rational(integer(1), k)) + next;
  }

 private:
  real_backend<R> be_;
};

/// Engel expansion y = 1/c_0 + 1/(c_0 c_1) + ...
template <class R = rational>
class engel_system {
 public:
  using element_type = R;
  using coefficient_type = extended_integer;
  static constexpr bool reversed_coefficient_order = true;

  explicit engel_system(real_backend<R> backend = {}) : be_(std::move(backend)) {}

  std::string id() const { return "engel"; }
  const real_backend<R>& backend() const noexcept { return be_; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const { require_unit_interval(be_, y); }

  extended_integer project(std::size_t, const R& y) const {
    if (be_.is_zero(y)) return extended_integer::positive_infinity();
    return be_.ceil(be_.lift(1) / y);
  }

  R expand(std::size_t i, const R& y) const {
    if (be_.is_zero(y)) return y;
    return y * be_.lift(rational(project(i, y).value())) - be_.lift(1);
  }

  std::optional<R> reconstruct(std::size_t, const extended_integer& c, const R& next) const {
    if (!c.is_finite()) {
      if (c.classification() == extended_integer::kind::positive_infinity && be_.is_zero(next)) return be_.lift(0);
      return std::nullopt;
    }
    const integer& k = c.value();
    if (k < 2 || be_.sign(next) < 0) return std::nullopt;
    // Image of F: 0 <= y' < 1/(k-1).
    if (be_.compare(next, rational(integer(1), integer(k - 1))) >= 0) return std::nullopt;
    return (be_.lift(1) + next) / be_.lift(rational(k));
  }

 private:
  real_backend<R> be_;
};

enum class monotone_direction { increasing, decreasing };

/// A strictly monotone f on [0,1) together with its inverse. A decreasing f
/// may have a pole at 0, in which case 0 maps to the coefficient +inf.
template <class R = rational>
struct f_expansion_spec {
  std::string id;
  std::function<R(const R&)> f;
  std::function<R(const R&)> f_inverse;
  /// Membership of v in f([0,1)).
  std::function<bool(const R&)> in_image;
  monotone_direction direction = monotone_direction::increasing;
  bool pole_at_zero = false;
};

/// f(y) = b*y, which reproduces the radix-b digits.
template <class R = rational>
f_expansion_spec<R> scaling_f_spec(long b, real_backend<R> be = {}) {
  return {"f:scale" + std::to_string(b),
          [b, be](const R& y) -> R { return y * be.lift(b); },
          [b, be](const R& v) -> R { return v / be.lift(b); },
          [b, be](const R& v) { return be.sign(v) >= 0 && be.compare(v, rational(b)) < 0; },
          monotone_direction::increasing,
          false};
}

/// f(y) = 1/y, which reproduces the continued fraction.
template <class R = rational>
f_expansion_spec<R> reciprocal_f_spec(real_backend<R> be = {}) {
  return {"f:reciprocal",
          [be](const R& y) -> R { return be.lift(1) / y; },
          [be](const R& v) -> R { return be.lift(1) / v; },
          [be](const R& v) { return be.compare(v, rational(1)) > 0; },
          monotone_direction::decreasing,
          true};
}

/// P y = floor(f(y)), E y = f(y) - floor(f(y)).
template <class R = rational>
class f_expansion_system {
 public:
  using element_type = R;
  using coefficient_type = extended_integer;

  explicit f_expansion_system(f_expansion_spec<R> spec, real_backend<R> backend = {})
      : spec_(std::move(spec)), be_(std::move(backend)) {}

  std::string id() const { return spec_.id; }
  const f_expansion_spec<R>& spec() const noexcept { return spec_; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const { require_unit_interval(be_, y); }

  extended_integer project(std::size_t, const R& y) const {
    if (spec_.pole_at_zero && be_.is_zero(y)) return extended_integer::positive_infinity();
    return be_.floor(spec_.f(y));
  }

  R expand(std::size_t, const R& y) const {
    if (spec_.pole_at_zero && be_.is_zero(y)) return y;
    R v = spec_.f(y);
    return v - be_.lift(rational(be_.floor(v)));
  }

  std::optional<R> reconstruct(std::size_t, const extended_integer& c, const R& next) const {
    if (!c.is_finite()) {
      if (spec_.pole_at_zero && c.classification() == extended_integer::kind::positive_infinity && be_.is_zero(next)) {
        return be_.lift(0);
      }
      return std::nullopt;
    }
    if (!in_unit_interval(be_, next)) return std::nullopt;
    R v = be_.lift(rational(c.value())) + next;
    if (!spec_.in_image(v)) return std::nullopt;
    return spec_.f_inverse(v);
  }

 private:
  f_expansion_spec<R> spec_;
  real_backend<R> be_;
};

/// Smallest c with y / 10^c < 1, and y / 10^c itself; (0, 0) for y = 0.
template <class R>
std::pair<integer, R> magnitude_prefix(const real_backend<R>& be, const R& y) {
  if (be.sign(y) < 0) throw domain_error("magnitude prefix of a negative number " + be.render(y));
  if (be.is_zero(y)) return {integer(0), y};
  long c = 0;
  auto below = [&](long e) { return be.compare(y, pow(rational(10), e)) < 0; };
  if (below(0)) {
    while (below(c - 1)) --c;
  } else {
    while (!below(c)) ++c;
  }
  return {integer(c), y / be.lift(pow(rational(10), c))};
}

/// Decimal expansion of a nonnegative real: level 0 emits the decimal
/// exponent, levels >= 1 emit the digits of the scaled value.
template <class R = rational>
class decimal_ext_system {
 public:
  using element_type = R;
  using coefficient_type = integer;

  explicit decimal_ext_system(real_backend<R> backend = {}) : digits_(10, backend), be_(std::move(backend)) {}

  std::string id() const { return "decimal-ext"; }

  R neutral(std::size_t) const { return be_.lift(0); }
  bool is_neutral(std::size_t, const R& y) const { return be_.is_zero(y); }
  void validate(const R& y) const {
    if (be_.sign(y) < 0) throw domain_error("element " + be_.render(y) + " is negative");
  }

  integer project(std::size_t i, const R& y) const {
    if (i == 0) return magnitude_prefix(be_, y).first;
    return digits_.project(i - 1, y);
  }

  R expand(std::size_t i, const R& y) const {
    if (i == 0) return magnitude_prefix(be_, y).second;
    return digits_.expand(i - 1, y);
  }

  std::optional<R> reconstruct(std::size_t i, const integer& c, const R& next) const {
    if (i != 0) return digits_.reconstruct(i - 1, c, next);
    if (be_.is_zero(next)) {
      if (c == 0) return be_.lift(0);
      return std::nullopt;
    }
    // The scaled value lies in [1/10, 1) by minimality of the exponent.
    if (be_.compare(next, rational(1, 10)) < 0 || be_.compare(next, rational(1)) >= 0) return std::nullopt;
    if (!c.fits_slong_p()) throw domain_error("decimal exponent out of range");
    return next * be_.lift(pow(rational(10), c.get_si()));
  }

 private:
  base_system<R> digits_;
  real_backend<R> be_;
};

}  // namespace expsys
