#pragma once

#include <string>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/real/certified_real.hpp"

namespace expsys {

/// Arithmetic backend for the real systems. Comparisons on the interval
/// backend are certified: they throw precision_exhausted instead of guessing.
template <class R>
struct real_backend;

template <>
struct real_backend<rational> {
  rational lift(const rational& q) const { return q; }
  integer floor(const rational& y) const { return expsys::floor(y); }
  integer ceil(const rational& y) const { return expsys::ceil(y); }
  int sign(const rational& y) const { return sgn(y); }
  bool is_zero(const rational& y) const { return y == 0; }
  /// Sign of y - q.
  int compare(const rational& y, const rational& q) const { return cmp(y, q); }
  std::string render(const rational& y) const { return to_string(y); }
};

template <>
struct real_backend<certified_real> {
  mpfr_prec_t bits = certified_real::default_bits;

  certified_real lift(const rational& q) const { return certified_real(q, bits); }
  integer floor(const certified_real& y) const { return y.floor(); }
  integer ceil(const certified_real& y) const { return y.ceil(); }
  int sign(const certified_real& y) const { return y.sign(); }
  bool is_zero(const certified_real& y) const { return y.is_zero(); }
  int compare(const certified_real& y, const rational& q) const { return (y - lift(q)).sign(); }
  std::string render(const certified_real& y) const { return y.to_string(); }
};

/// Throws domain_error unless 0 <= y < 1.
template <class R>
void require_unit_interval(const real_backend<R>& be, const R& y) {
  if (be.sign(y) < 0 || be.compare(y, rational(1)) >= 0) {
    throw domain_error("element " + be.render(y) + " is outside [0,1)");
  }
}

template <class R>
bool in_unit_interval(const real_backend<R>& be, const R& y) {
  return be.sign(y) >= 0 && be.compare(y, rational(1)) < 0;
}

}  // namespace expsys
