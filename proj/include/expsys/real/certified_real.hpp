#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include <mpfr.h>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"

namespace expsys {

/// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds
/// outward, so the true value stays enclosed.
class certified_real {
 public:
  static constexpr mpfr_prec_t default_bits = 256;

  explicit certified_real(mpfr_prec_t bits = default_bits) : bits_(bits) {
    mpfr_init2(lo_, bits_);
    mpfr_init2(hi_, bits_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  certified_real(const rational& q, mpfr_prec_t bits) : certified_real(bits) {
    mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
  }

  certified_real(const certified_real& other) : certified_real(other.bits_) {
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }

  certified_real(certified_real&& other) noexcept : certified_real(other.bits_) { swap(other); }

  certified_real& operator=(certified_real other) noexcept {
    swap(other);
    return *this;
  }

  ~certified_real() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void swap(certified_real& other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    std::swap(bits_, other.bits_);
  }

  static certified_real pi(mpfr_prec_t bits) {
    certified_real r(bits);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  static certified_real e(mpfr_prec_t bits) { return certified_real(rational(1), bits).exp(); }

  mpfr_prec_t precision() const noexcept { return bits_; }
  mpfr_srcptr lower() const noexcept { return lo_; }
  mpfr_srcptr upper() const noexcept { return hi_; }

  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

  /// True when a == b is certain, false when a != b is certain.
  bool is_zero() const {
    if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) return true;
    if (mpfr_sgn(lo_) > 0 || mpfr_sgn(hi_) < 0) return false;
    throw precision_exhausted("cannot certify zero: interval " + to_string() + " straddles 0");
  }

  /// Sign of the enclosed value; throws when the interval contains 0 and
  /// is not exactly [0,0].
  int sign() const {
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    if (is_zero()) return 0;
    throw precision_exhausted("cannot certify sign of " + to_string());
  }

  bool contains(const rational& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }

  bool overlaps(const certified_real& other) const {
    return mpfr_lessequal_p(lo_, other.hi_) != 0 && mpfr_lessequal_p(other.lo_, hi_) != 0;
  }

  integer floor() const { return rounded(mpfr_rint_floor, "floor"); }
  integer ceil() const { return rounded(mpfr_rint_ceil, "ceil"); }

  certified_real operator-() const {
    certified_real r(bits_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
  }

  friend certified_real operator+(const certified_real& a, const certified_real& b) {
    certified_real r(std::max(a.bits_, b.bits_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend certified_real operator-(const certified_real& a, const certified_real& b) {
    certified_real r(std::max(a.bits_, b.bits_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend certified_real operator*(const certified_real& a, const certified_real& b) {
    const mpfr_prec_t bits = std::max(a.bits_, b.bits_);
    certified_real r(bits);
    mpfr_t t;
    mpfr_init2(t, bits);
    std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> corners{
        {{a.lo_, b.lo_}, {a.lo_, b.hi_}, {a.hi_, b.lo_}, {a.hi_, b.hi_}}};
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (const auto& [x, y] : corners) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
    mpfr_clear(t);
    return r;
  }

  friend certified_real operator/(const certified_real& a, const certified_real& b) {
    return a * b.reciprocal();
  }

  certified_real reciprocal() const {
    if (mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0) {
      if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) throw domain_error("division by zero");
      throw precision_exhausted("divisor interval " + to_string() + " contains 0");
    }
    certified_real r(bits_);
    mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
    mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
    return r;
  }

  certified_real sqrt() const {
    if (mpfr_sgn(hi_) < 0) throw domain_error("sqrt of a negative number");
    if (mpfr_sgn(lo_) < 0) throw precision_exhausted("sqrt argument " + to_string() + " may be negative");
    certified_real r(bits_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  certified_real exp() const {
    certified_real r(bits_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  certified_real log() const {
    if (mpfr_sgn(hi_) <= 0) throw domain_error("log of a non-positive number");
    if (mpfr_sgn(lo_) <= 0) throw precision_exhausted("log argument " + to_string() + " may be non-positive");
    certified_real r(bits_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  /// Integer power by repeated squaring on intervals.
  certified_real pow(long exponent) const {
    if (exponent < 0) return pow(-exponent).reciprocal();
    certified_real result(rational(1), bits_);
    certified_real base = *this;
    for (unsigned long e = static_cast<unsigned long>(exponent); e != 0; e >>= 1U) {
      if ((e & 1UL) != 0) result = result * base;
      if (e > 1) base = base * base;
    }
    return result;
  }

  /// Midpoint, rounded to the nearest double.
  double approx() const {
    mpfr_t m;
    mpfr_init2(m, bits_ + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    const double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
  }

  /// "[lo,hi]" with 17 significant digits per endpoint, rounded outward.
  std::string to_string() const { return "[" + endpoint(lo_, MPFR_RNDD) + "," + endpoint(hi_, MPFR_RNDU) + "]"; }

  /// Identical endpoints (precision is not compared).
  friend bool operator==(const certified_real& a, const certified_real& b) {
    return mpfr_equal_p(a.lo_, b.lo_) != 0 && mpfr_equal_p(a.hi_, b.hi_) != 0;
  }

 private:
  template <class Round>
  integer rounded(Round op, const char* what) const {
    if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_)) throw precision_exhausted(std::string(what) + " of a non-finite interval");
    mpfr_t a;
    mpfr_t b;
    mpfr_init2(a, bits_);
    mpfr_init2(b, bits_);
    op(a, lo_, MPFR_RNDN);
    op(b, hi_, MPFR_RNDN);
    const bool agree = mpfr_equal_p(a, b) != 0;
    integer result;
    if (agree) mpfr_get_z(result.get_mpz_t(), a, MPFR_RNDN);
    mpfr_clear(a);
    mpfr_clear(b);
    if (!agree) throw precision_exhausted(std::string("cannot certify ") + what + " of " + to_string());
    return result;
  }

  static std::string endpoint(mpfr_srcptr x, mpfr_rnd_t rnd) {
    if (mpfr_zero_p(x)) return "0";
    if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
    char* raw = nullptr;
    mpfr_asprintf(&raw, rnd == MPFR_RNDD ? "%.16RDe" : "%.16RUe", x);
    std::string s(raw);
    mpfr_free_str(raw);
    return s;
  }

  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t bits_;
};

inline std::string to_string(const certified_real& x) { return x.to_string(); }

}  // namespace expsys
