#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "expsys/core/errors.hpp"

namespace expsys {

using integer = mpz_class;
using rational = mpq_class;

inline rational make_rational(long num, long den = 1) {
  rational q(num, den);
  q.canonicalize();
  return q;
}

inline rational make_rational(const integer& num, const integer& den) {
  rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "-p" or "p/q" (decimal digits only). Throws domain_error.
inline rational parse_rational(std::string_view text) {
  std::string s(text);
  rational q;
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw domain_error("not a rational literal: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

/// Canonical text: "p" for integers, "p/q" otherwise.
inline std::string to_string(const rational& q) { return q.get_str(); }
inline std::string to_string(const integer& z) { return z.get_str(); }

inline rational abs(const rational& q) { return q < 0 ? rational(-q) : q; }

inline integer floor(const rational& q) {
  integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline integer ceil(const rational& q) {
  integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline rational pow(const rational& base, long exponent) {
  rational result = 1;
  rational b = base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  while (e != 0) {
    if ((e & 1UL) != 0) result *= b;
    b *= b;
    e >>= 1U;
  }
  if (exponent < 0) {
    if (result == 0) throw domain_error("zero to a negative power");
    result = 1 / result;
  }
  return result;
}

/// Integer with the two infinities adjoined. Orders as -inf < finite < +inf.
class extended_integer {
 public:
  enum class kind : std::int8_t { negative_infinity = -1, finite = 0, positive_infinity = 1 };

  extended_integer() = default;
  extended_integer(integer value) : value_(std::move(value)) {}  // NOLINT(implicit)
  extended_integer(long value) : value_(value) {}                // NOLINT(implicit)

  static extended_integer positive_infinity() { return extended_integer(kind::positive_infinity); }
  static extended_integer negative_infinity() { return extended_integer(kind::negative_infinity); }

  bool is_finite() const noexcept { return kind_ == kind::finite; }
  kind classification() const noexcept { return kind_; }

  const integer& value() const {
    if (!is_finite()) throw domain_error("value() of an infinite coefficient");
    return value_;
  }

  friend bool operator==(const extended_integer& a, const extended_integer& b) {
    return a.kind_ == b.kind_ && (a.kind_ != kind::finite || a.value_ == b.value_);
  }

  friend std::strong_ordering operator<=>(const extended_integer& a, const extended_integer& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != kind::finite) return std::strong_ordering::equal;
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit extended_integer(kind k) : kind_(k) {}

  kind kind_ = kind::finite;
  integer value_ = 0;
};

inline std::string to_string(const extended_integer& c) {
  switch (c.classification()) {
    case extended_integer::kind::positive_infinity: return "inf";
    case extended_integer::kind::negative_infinity: return "-inf";
    case extended_integer::kind::finite: break;
  }
  return c.value().get_str();
}

inline std::ostream& operator<<(std::ostream& os, const extended_integer& c) { return os << to_string(c); }

/// Natural number or infinity; the multiplicity of a zero.
class nat_or_inf {
 public:
  constexpr nat_or_inf() = default;
  constexpr nat_or_inf(std::size_t n) : value_(n) {}  // NOLINT(implicit)
  static constexpr nat_or_inf infinity() { return nat_or_inf(std::nullopt); }

  constexpr bool is_infinite() const noexcept { return !value_.has_value(); }
  constexpr std::size_t value() const {
    if (!value_) throw domain_error("value() of an infinite multiplicity");
    return *value_;
  }

  friend constexpr bool operator==(const nat_or_inf&, const nat_or_inf&) = default;
  friend constexpr std::strong_ordering operator<=>(const nat_or_inf& a, const nat_or_inf& b) {
    if (a.is_infinite() || b.is_infinite()) return (a.is_infinite() ? 1 : 0) <=> (b.is_infinite() ? 1 : 0);
    return *a.value_ <=> *b.value_;
  }

 private:
  constexpr explicit nat_or_inf(std::nullopt_t) : value_(std::nullopt) {}
  std::optional<std::size_t> value_ = 0;
};

inline std::string to_string(const nat_or_inf& m) {
  return m.is_infinite() ? std::string("inf") : std::to_string(m.value());
}

/// Rational number or +infinity (the image of 0 under y -> 1/y).
class extended_rational {
 public:
  extended_rational() = default;
  extended_rational(rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  static extended_rational infinity() {
    extended_rational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const noexcept { return infinite_; }
  const rational& value() const {
    if (infinite_) throw domain_error("value() of infinity");
    return value_;
  }

  friend bool operator==(const extended_rational& a, const extended_rational& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const extended_rational& a, const extended_rational& b) {
    if (a.infinite_ || b.infinite_) return (a.infinite_ ? 1 : 0) <=> (b.infinite_ ? 1 : 0);
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  rational value_ = 0;
  bool infinite_ = false;
};

inline std::string to_string(const extended_rational& r) {
  return r.is_infinite() ? std::string("inf") : to_string(r.value());
}

}  // namespace expsys
