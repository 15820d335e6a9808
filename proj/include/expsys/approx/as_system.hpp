#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/core/system.hpp"
#include "expsys/series/power_series.hpp"

// Approximation systems on truncated germs at x0. Level i transforms y by
// T (D, K or K.D), reads off the leading term c w^m of T y (w = x - x0) and
// passes (T y / (c w^m))^alpha_i, or its logarithm, to the next level.

namespace expsys {

enum class as_transform { d, k, kd };
enum class as_nonlinearity { power, logexp };

inline std::string to_string(as_transform t) {
  switch (t) {
    case as_transform::d: return "d";
    case as_transform::k: return "k";
    case as_transform::kd: return "kd";
  }
  return "?";
}

inline std::string to_string(as_nonlinearity n) { return n == as_nonlinearity::power ? "power" : "logexp"; }

/// Level-indexed exponents alpha_i.
class alpha_schedule {
 public:
  alpha_schedule(std::function<rational(std::size_t)> at, std::string description)
      : at_(std::move(at)), description_(std::move(description)) {}

  static alpha_schedule constant(const rational& a) {
    return alpha_schedule([a](std::size_t) { return a; }, to_string(a));
  }

  /// a_0, a_1, ..., a_k, a_k, a_k, ...
  static alpha_schedule list(std::vector<rational> values) {
    if (values.empty()) throw domain_error("empty alpha schedule");
    std::string text;
    for (const auto& v : values) text += (text.empty() ? "" : ",") + to_string(v);
    return alpha_schedule(
        [values = std::move(values)](std::size_t i) { return values[std::min(i, values.size() - 1)]; },
        std::move(text));
  }

  rational operator()(std::size_t i) const {
    rational a = at_(i);
    if (a == 0) throw domain_error("alpha_" + std::to_string(i) + " is zero");
    return a;
  }
  const std::string& description() const noexcept { return description_; }

 private:
  std::function<rational(std::size_t)> at_;
  std::string description_;
};

struct as_config {
  as_transform transform = as_transform::d;
  as_nonlinearity nonlinearity = as_nonlinearity::power;
  alpha_schedule alpha = alpha_schedule::constant(1);
  rational base_point = 0;
  /// Nominal truncation order N of every series.
  std::size_t series_order = 64;
  /// Constant term at level 0 when it differs from the convention
  /// (1 for power, 0 for logexp), e.g. 0 for K applied to tan x.
  std::optional<rational> level0_constant;
  /// A transformed series with fewer stored coefficients than this, all of
  /// them zero, is not trusted to be identically zero.
  std::size_t zero_certainty = 2;
};

/// (c, m) for D and K, (b, c, m) for K.D. The neutral coefficient has c = 0
/// and m = inf.
struct as_coefficient {
  rational c = 0;
  nat_or_inf m = nat_or_inf::infinity();
  std::optional<rational> b;

  friend bool operator==(const as_coefficient&, const as_coefficient&) = default;
};

inline std::string to_string(const as_coefficient& a) {
  std::string s = "(";
  if (a.b) s += to_string(*a.b) + ",";
  return s + to_string(a.c) + "," + to_string(a.m) + ")";
}

/// M(y): index of the first nonzero coefficient, or inf for the zero germ.
/// Throws truncation_inconclusive when every stored coefficient is zero but
/// fewer than `certainty` of them are stored.
inline nat_or_inf multiplicity(const power_series& y, std::size_t certainty = 0) {
  const std::size_t k = y.first_nonzero();
  if (k <= y.order()) return k;
  if (y.order() + 1 < certainty) {
    throw truncation_inconclusive("series vanishes through order " + std::to_string(y.order()) +
                                  ", too short to certify a zero germ");
  }
  return nat_or_inf::infinity();
}

class as_system {
 public:
  using element_type = power_series;
  using coefficient_type = as_coefficient;

  explicit as_system(as_config config) : cfg_(std::move(config)) {
    if (cfg_.series_order == 0) throw domain_error("series order must be positive");
  }

  const as_config& config() const noexcept { return cfg_; }

  std::string id() const {
    std::string s = "as-" + to_string(cfg_.transform) + "-" + to_string(cfg_.nonlinearity);
    if (cfg_.nonlinearity == as_nonlinearity::power) s += "[" + cfg_.alpha.description() + "]";
    return s;
  }

  /// Constant term of the germs at level i.
  rational level_constant(std::size_t i) const {
    if (i == 0 && cfg_.level0_constant) return *cfg_.level0_constant;
    return cfg_.nonlinearity == as_nonlinearity::power ? rational(1) : rational(0);
  }

  power_series neutral(std::size_t i) const {
    return power_series::constant(level_constant(i), cfg_.base_point, cfg_.series_order);
  }

  bool is_neutral(std::size_t i, const power_series& y) const {
    if (y.constant_term() != level_constant(i)) return false;
    for (std::size_t k = 1; k <= y.order(); ++k) {
      if (y[k] != 0) return false;
    }
    return true;
  }

  void validate(const power_series& y) const {
    if (y.base_point() != cfg_.base_point) {
      throw domain_error("germ at " + to_string(y.base_point()) + ", system expects " + to_string(cfg_.base_point));
    }
    if (y.constant_term() != level_constant(0)) {
      throw domain_error("constant term " + to_string(y.constant_term()) + ", system expects " +
                         to_string(level_constant(0)));
    }
    if (y.order() > cfg_.series_order) {
      throw domain_error("series of order " + std::to_string(y.order()) + " exceeds the system order " +
                         std::to_string(cfg_.series_order));
    }
  }

  /// T y for the configured transform.
  power_series transformed(const power_series& y) const {
    switch (cfg_.transform) {
      case as_transform::d: return y.derivative();
      case as_transform::k: return chop(y);
      case as_transform::kd: return chop(y.derivative());
    }
    return y;
  }

  as_coefficient project(std::size_t, const power_series& y) const {
    as_coefficient a;
    if (cfg_.transform == as_transform::kd) a.b = y.derivative().constant_term();
    const power_series t = transformed(y);
    a.m = multiplicity(t, cfg_.zero_certainty);
    if (!a.m.is_infinite()) a.c = t[a.m.value()];
    return a;
  }

  power_series expand(std::size_t i, const power_series& y) const {
    const as_coefficient a = project(i, y);
    if (a.m.is_infinite()) return power_series::constant(level_constant(i + 1), cfg_.base_point, y.order());
    const power_series h = (1 / a.c) * transformed(y).shifted_down(a.m.value());
    if (cfg_.nonlinearity == as_nonlinearity::logexp) return series_log(h);
    return series_pow(h, cfg_.alpha(i));
  }

  std::optional<power_series> reconstruct(std::size_t i, const as_coefficient& a, const power_series& next) const {
    if (next.base_point() != cfg_.base_point || next.constant_term() != level_constant(i + 1)) return std::nullopt;
    if (a.b.has_value() != (cfg_.transform == as_transform::kd)) return std::nullopt;
    const rational kappa = level_constant(i);
    const rational b = a.b.value_or(0);
    if (a.m.is_infinite() || a.c == 0) {
      if (!(a.m.is_infinite() && a.c == 0) || !is_neutral(i + 1, next)) return std::nullopt;
      return capped(linear(kappa, b, next.order()));
    }
    const std::size_t m = a.m.value();
    // K and K.D remove the constant term, so their leading term has m >= 1.
    if (cfg_.transform != as_transform::d && m == 0) return std::nullopt;
    const power_series g = cfg_.nonlinearity == as_nonlinearity::logexp ? series_exp(next)
                                                                         : series_pow(next, 1 / cfg_.alpha(i));
    const power_series leading = a.c * g.shifted_up(m);
    switch (cfg_.transform) {
      case as_transform::d: return capped(leading.integral(kappa));
      case as_transform::k: return capped(leading + kappa);
      case as_transform::kd: {
        const power_series y = leading.integral(kappa);
        return capped(y + linear(0, b, y.order()));
      }
    }
    return std::nullopt;
  }

 private:
  static power_series chop(const power_series& y) { return y + (-y.constant_term()); }

  power_series linear(const rational& kappa, const rational& b, std::size_t order) const {
    std::vector<rational> c(order + 1);
    c[0] = kappa;
    if (order >= 1) c[1] = b;
    return power_series(cfg_.base_point, std::move(c));
  }

  power_series capped(power_series y) const {
    return y.order() > cfg_.series_order ? y.truncated(cfg_.series_order) : y;
  }

  as_config cfg_;
};

/// The first n-1 nonzero coefficients of y reappear in y^[n] at the same
/// positions, with no other nonzero coefficient of y^[n] before the last of
/// them. When y has fewer than n-1 nonzero coefficients, all of them must
/// reappear. Vacuous for n <= 1; throws domain_error if y^[n] is improper.
template <expansion_system S>
  requires std::same_as<element_t<S>, power_series>
bool head_coincidence(const S& sys, const power_series& y, std::size_t n) {
  if (n <= 1) return true;
  const auto code = coefficient_code_of(sys, y, n);
  const power_series yn = convergent(sys, code, n).value();
  const std::size_t want = n - 1;
  std::size_t seen = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k <= y.order() && seen < want; ++k) {
    if (y[k] != 0) {
      ++seen;
      last = k;
    }
  }
  if (seen == 0) return yn.is_zero();
  if (last > yn.order()) {
    throw truncation_inconclusive("convergent of order " + std::to_string(yn.order()) + " cannot show position " +
                                  std::to_string(last));
  }
  return y.agrees_through(yn, last);
}

/// Smallest period p <= max_period such that the tail of `values` repeats
/// with period p over at least p comparisons.
template <class C>
std::optional<std::size_t> detect_cycle(const std::vector<C>& values, std::size_t max_period) {
  for (std::size_t p = 1; p <= max_period && 2 * p <= values.size(); ++p) {
    // Walk back from the end while values[i] == values[i + p].
    std::size_t start = values.size() - p;
    while (start > 0 && values[start - 1] == values[start - 1 + p]) --start;
    if (values.size() - p - start >= p) return p;
  }
  return std::nullopt;
}

template <class C>
std::optional<std::size_t> detect_cycle(const coefficient_code<C>& code, std::size_t max_period) {
  return detect_cycle(code.values, max_period);
}

/// Nested-integral rendering of y^[n] from its raw code, e.g.
/// "1 + int[0..x] 1/2 w^0 (1 + int[0..x] 3/4 w^0 (1)^2 dw)^2 dw".
inline std::string render_nested(const as_system& sys, const std::vector<as_coefficient>& code, std::size_t n) {
  if (code.size() < n) throw domain_error("code shorter than the requested order");
  const as_config& cfg = sys.config();
  const std::string x0 = to_string(cfg.base_point);
  std::string inner = to_string(sys.level_constant(n));
  for (std::size_t i = n; i-- > 0;) {
    const as_coefficient& a = code[i];
    const std::string kappa = to_string(sys.level_constant(i));
    if (a.m.is_infinite()) {
      inner = kappa + (a.b && *a.b != 0 ? " + " + to_string(*a.b) + " w" : "");
      continue;
    }
    std::string g;
    if (cfg.nonlinearity == as_nonlinearity::logexp) {
      g = "exp(" + inner + ")";
    } else {
      const rational root = 1 / cfg.alpha(i);
      g = root == 1 ? "(" + inner + ")" : "(" + inner + ")^(" + to_string(root) + ")";
    }
    const std::string term = to_string(a.c) + " w^" + std::to_string(a.m.value()) + " " + g;
    std::ostringstream os;
    os << kappa;
    if (a.b) os << " + " << to_string(*a.b) << " w";
    if (cfg.transform == as_transform::k) {
      os << " + " << term;
    } else {
      os << " + int[" << x0 << "..x] " << term << " dw";
    }
    inner = os.str();
  }
  return inner;
}

}  // namespace expsys
