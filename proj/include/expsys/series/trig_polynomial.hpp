#pragma once

#include <cstddef>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"

namespace expsys {

/// Gaussian rational re + im*i.
struct complex_rational {
  rational re = 0;
  rational im = 0;

  complex_rational() = default;
  complex_rational(rational r, rational i = 0) : re(std::move(r)), im(std::move(i)) {}  // NOLINT(implicit)
  complex_rational(long r) : re(r) {}                                                   // NOLINT(implicit)

  bool is_zero() const { return re == 0 && im == 0; }
  complex_rational conj() const { return {re, -im}; }

  friend complex_rational operator+(const complex_rational& a, const complex_rational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend complex_rational operator-(const complex_rational& a, const complex_rational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  complex_rational operator-() const { return {-re, -im}; }
  friend complex_rational operator*(const complex_rational& a, const complex_rational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend complex_rational operator/(const complex_rational& a, const complex_rational& b) {
    const rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw domain_error("complex division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const complex_rational& a, const complex_rational& b) { return a.re == b.re && a.im == b.im; }
};

/// "re", "imi" or "re+imi" / "re-imi".
inline std::string to_string(const complex_rational& z) {
  if (z.im == 0) return z.re.get_str();
  const std::string im = (abs(z.im) == 1 ? std::string() : abs(z.im).get_str()) + "i";
  if (z.re == 0) return (z.im < 0 ? "-" : "") + im;
  return z.re.get_str() + (z.im < 0 ? "-" : "+") + im;
}

/// Finite sum of modes c_k e^{ikx}; zero amplitudes are never stored.
class trig_polynomial {
 public:
  using mode_map = std::map<long, complex_rational>;

  trig_polynomial() = default;
  explicit trig_polynomial(mode_map modes) {
    for (auto& [k, c] : modes) set(k, std::move(c));
  }
  trig_polynomial(const complex_rational& constant) { set(0, constant); }  // NOLINT(implicit)

  /// e^{ikx}.
  static trig_polynomial exponential(long k, const complex_rational& amplitude = rational(1)) {
    trig_polynomial t;
    t.set(k, amplitude);
    return t;
  }
  static trig_polynomial cosine(long k) {
    if (k == 0) return trig_polynomial(complex_rational(1));
    return trig_polynomial(mode_map{{k, rational(1, 2)}, {-k, rational(1, 2)}});
  }
  static trig_polynomial sine(long k) {
    if (k == 0) return {};
    return trig_polynomial(mode_map{{k, complex_rational(0, rational(-1, 2))}, {-k, complex_rational(0, rational(1, 2))}});
  }

  const mode_map& modes() const noexcept { return modes_; }
  bool is_zero() const noexcept { return modes_.empty(); }

  complex_rational mode(long k) const {
    auto it = modes_.find(k);
    return it == modes_.end() ? complex_rational() : it->second;
  }

  void set(long k, complex_rational c) {
    if (c.is_zero()) {
      modes_.erase(k);
    } else {
      modes_[k] = std::move(c);
    }
  }

  /// Largest |k| with a nonzero amplitude; -1 for zero.
  long degree() const {
    long d = -1;
    for (const auto& [k, c] : modes_) d = std::max(d, std::labs(k));
    return d;
  }

  /// Smallest |k| with a nonzero amplitude; -1 for zero.
  long lowest_mode() const {
    long d = -1;
    for (const auto& [k, c] : modes_) {
      if (d < 0 || std::labs(k) < d) d = std::labs(k);
    }
    return d;
  }

  trig_polynomial operator-() const {
    trig_polynomial r = *this;
    for (auto& [k, c] : r.modes_) c = -c;
    return r;
  }
  friend trig_polynomial operator+(const trig_polynomial& a, const trig_polynomial& b) {
    trig_polynomial r = a;
    for (const auto& [k, c] : b.modes_) r.set(k, r.mode(k) + c);
    return r;
  }
  friend trig_polynomial operator-(const trig_polynomial& a, const trig_polynomial& b) { return a + (-b); }
  friend trig_polynomial operator*(const trig_polynomial& a, const trig_polynomial& b) {
    trig_polynomial r;
    for (const auto& [j, x] : a.modes_) {
      for (const auto& [k, y] : b.modes_) r.set(j + k, r.mode(j + k) + x * y);
    }
    return r;
  }

  friend bool operator==(const trig_polynomial&, const trig_polynomial&) = default;

 private:
  mode_map modes_;
};

/// "{k: c, ...}" in increasing k; "{}" for zero.
inline std::string to_string(const trig_polynomial& t) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, c] : t.modes()) {
    if (!first) os << ", ";
    first = false;
    os << k << ": " << to_string(c);
  }
  os << "}";
  return os.str();
}

}  // namespace expsys
