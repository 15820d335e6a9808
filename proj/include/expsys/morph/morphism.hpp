#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expsys/approx/as_system.hpp"
#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/core/system.hpp"
#include "expsys/real/systems.hpp"
#include "expsys/series/polynomial.hpp"
#include "expsys/series/systems.hpp"

// Homomorphisms between expansion systems: per-level maps on elements and
// on coefficients that commute with neutral elements, projections and
// expansions. Everything here is checked on samples.

namespace expsys {

template <class E1, class C1, class E2 = E1, class C2 = C1>
struct morphism_spec {
  std::string name;
  std::function<E2(std::size_t, const E1&)> lambda_s;
  std::function<C2(std::size_t, const C1&)> lambda_c;
  bool claims_bijective = false;
  std::function<E1(std::size_t, const E2&)> inverse_s;
  std::function<C1(std::size_t, const C2&)> inverse_c;
};

struct morphism_violation {
  /// "hom-neut", "hom-P", "hom-E", "inverse-S", "inverse-C" or "target-error".
  std::string equation;
  std::size_t level = 0;
  /// Index into the sample list; unset for hom-neut.
  std::optional<std::size_t> sample;
  std::string detail;
};

struct homomorphism_report {
  std::string spec_name;
  std::string source_id;
  std::string target_id;
  std::size_t samples = 0;
  std::size_t depth = 0;
  std::size_t checks = 0;
  std::optional<morphism_violation> violation;

  bool passed() const noexcept { return !violation.has_value(); }

  std::string summary() const {
    if (passed()) {
      return "no violation found on " + std::to_string(samples) + " samples to depth " + std::to_string(depth);
    }
    std::string s = violation->equation + " fails at level " + std::to_string(violation->level);
    if (violation->sample) s += " on sample " + std::to_string(*violation->sample);
    return s + ": " + violation->detail;
  }
};

namespace detail {

template <class T>
std::string render_any(const T& v) {
  if constexpr (requires { to_string(v); }) {
    return to_string(v);
  } else {
    return "<value>";
  }
}

}  // namespace detail

/// Checks hom-neut for levels 0..depth and hom-P, hom-E along each sample's
/// trajectory for levels 0..depth-1; for bijective specs also the inverses.
/// Stops at the first violation.
template <expansion_system S, expansion_system T>
homomorphism_report verify_homomorphism(
    const morphism_spec<element_t<S>, coefficient_t<S>, element_t<T>, coefficient_t<T>>& spec, const S& source,
    const T& target, const std::vector<element_t<S>>& samples, std::size_t depth) {
  homomorphism_report report{spec.name, std::string(source.id()), std::string(target.id()), samples.size(), depth, 0,
                             std::nullopt};
  auto fail = [&](std::string eq, std::size_t level, std::optional<std::size_t> sample, std::string detail) {
    report.violation = morphism_violation{std::move(eq), level, sample, std::move(detail)};
    return report;
  };

  for (std::size_t i = 0; i <= depth; ++i) {
    ++report.checks;
    const auto image = spec.lambda_s(i, source.neutral(i));
    if (!target.is_neutral(i, image)) {
      return fail("hom-neut", i, std::nullopt, "image of the neutral element is " + detail::render_any(image));
    }
  }

  for (std::size_t s = 0; s < samples.size(); ++s) {
    try {
      validate_input(source, samples[s]);
      element_t<S> y = samples[s];
      for (std::size_t i = 0; i < depth; ++i) {
        const auto ly = spec.lambda_s(i, y);
        const auto c = source.project(i, y);
        const auto lc = spec.lambda_c(i, c);
        const auto pc = target.project(i, ly);
        ++report.checks;
        if (!(pc == lc)) {
          return fail("hom-P", i, s,
                      "target projects " + detail::render_any(pc) + ", mapped coefficient is " + detail::render_any(lc));
        }
        const auto next = source.expand(i, y);
        const auto lhs = spec.lambda_s(i + 1, next);
        const auto rhs = target.expand(i, ly);
        ++report.checks;
        if (!(lhs == rhs)) {
          return fail("hom-E", i, s, detail::render_any(lhs) + " != " + detail::render_any(rhs));
        }
        if (spec.claims_bijective) {
          report.checks += 2;
          if (!(spec.inverse_s(i, ly) == y)) return fail("inverse-S", i, s, "inverse does not undo lambda_S");
          if (!(spec.inverse_c(i, lc) == c)) return fail("inverse-C", i, s, "inverse does not undo lambda_C");
        }
        y = next;
      }
    } catch (const error& e) {
      return fail("target-error", 0, s, std::string(e.kind()) + ": " + e.what());
    }
  }
  return report;
}

/// y'^[n] computed through the source system: Lambda_S (source convergent of
/// Lambda_S^-1 y'), stage by stage. The verdict is the source verdict.
template <expansion_system S, expansion_system T>
convergent_trace<element_t<T>> translate_convergent(
    const morphism_spec<element_t<S>, coefficient_t<S>, element_t<T>, coefficient_t<T>>& spec, const S& source,
    const T&, const element_t<T>& y_target, std::size_t n) {
  if (!spec.claims_bijective || !spec.inverse_s) throw domain_error("translate_convergent needs a bijective spec");
  const auto y = spec.inverse_s(0, y_target);
  const auto trace = convergent(source, coefficient_code_of(source, y, n), n);
  convergent_trace<element_t<T>> out;
  out.order = trace.order;
  out.verdict = trace.verdict;
  out.stages.resize(trace.stages.size());
  for (std::size_t i = 0; i < trace.stages.size(); ++i) {
    if (trace.stages[i]) out.stages[i] = spec.lambda_s(i, *trace.stages[i]);
  }
  return out;
}

/// Transport of convergents: if y is proper at n in the source, then
/// Lambda_S y is proper at n in the target and its convergent is
/// Lambda_S(y^[n]). Returns nullopt when y is improper at n.
template <expansion_system S, expansion_system T>
std::optional<bool> convergent_transported(
    const morphism_spec<element_t<S>, coefficient_t<S>, element_t<T>, coefficient_t<T>>& spec, const S& source,
    const T& target, const element_t<S>& y, std::size_t n) {
  const auto here = convergent(source, coefficient_code_of(source, y, n), n);
  if (!here.is_proper()) return std::nullopt;
  const auto ly = spec.lambda_s(0, y);
  const auto there = convergent(target, coefficient_code_of(target, ly, n), n);
  return there.is_proper() && there.value() == spec.lambda_s(0, here.value());
}

template <class E, class C>
morphism_spec<E, C> identity_morphism() {
  auto s = [](std::size_t, const E& y) { return y; };
  auto c = [](std::size_t, const C& v) { return v; };
  return {"identity", s, c, true, s, c};
}

template <class E1, class C1, class E2, class C2>
morphism_spec<E2, C2, E1, C1> inverse_morphism(const morphism_spec<E1, C1, E2, C2>& m) {
  if (!m.claims_bijective) throw domain_error("morphism " + m.name + " is not bijective");
  return {"inverse(" + m.name + ")", m.inverse_s, m.inverse_c, true, m.lambda_s, m.lambda_c};
}

/// second after first.
template <class E1, class C1, class E2, class C2, class E3, class C3>
morphism_spec<E1, C1, E3, C3> compose(const morphism_spec<E2, C2, E3, C3>& second,
                                      const morphism_spec<E1, C1, E2, C2>& first) {
  morphism_spec<E1, C1, E3, C3> m;
  m.name = second.name + " . " + first.name;
  m.lambda_s = [f = first.lambda_s, g = second.lambda_s](std::size_t i, const E1& y) { return g(i, f(i, y)); };
  m.lambda_c = [f = first.lambda_c, g = second.lambda_c](std::size_t i, const C1& c) { return g(i, f(i, c)); };
  m.claims_bijective = first.claims_bijective && second.claims_bijective;
  if (m.claims_bijective) {
    m.inverse_s = [f = first.inverse_s, g = second.inverse_s](std::size_t i, const E3& y) { return f(i, g(i, y)); };
    m.inverse_c = [f = first.inverse_c, g = second.inverse_c](std::size_t i, const C3& c) { return f(i, g(i, c)); };
  }
  return m;
}

/// y(x) -> (-1)^(i+1) y(-x) and c -> (-1)^(i+1) c: from forward to backward
/// differences. Self-inverse at every level.
inline morphism_spec<polynomial, rational> newton_reflection_morphism() {
  auto sign = [](std::size_t i) { return i % 2 == 0 ? rational(-1) : rational(1); };
  auto s = [sign](std::size_t i, const polynomial& y) { return polynomial(sign(i)) * y.compose_affine(-1, 0); };
  auto c = [sign](std::size_t i, const rational& v) -> rational { return sign(i) * v; };
  return {"newton-reflection", s, c, true, s, c};
}

/// E_i = E2_i . E1_i with E1_i bijective onto the intermediate space.
template <class E, class EPrime>
struct expansion_split {
  std::function<EPrime(std::size_t, const E&)> e1;
  std::function<E(std::size_t, const EPrime&)> e1_inverse;
  std::function<E(std::size_t, const EPrime&)> e2;
};

template <expansion_system S, class EPrime>
struct shifted_system {
  function_system<EPrime, coefficient_t<S>> target;
  morphism_spec<element_t<S>, coefficient_t<S>, EPrime, coefficient_t<S>> spec;
};

/// The primed system living on the intermediate spaces:
///   nu'_i = E1_i nu_i, P'_i = P_i . E1_i^-1, E'_i = E1_{i+1} . E2_i,
/// with Lambda_S,i = E1_i and Lambda_C,i = id. The split is checked on the
/// trajectories of `samples` (E1^-1 E1 = id and E2 E1 = E) to `depth`.
template <expansion_system S, class EPrime>
shifted_system<S, EPrime> shift_isomorphism(const S& source, const expansion_split<element_t<S>, EPrime>& split,
                                            const std::vector<element_t<S>>& samples = {}, std::size_t depth = 0) {
  using E = element_t<S>;
  using C = coefficient_t<S>;
  for (const auto& y0 : samples) {
    const auto stages = trajectory(source, y0, depth);
    for (std::size_t i = 0; i < depth; ++i) {
      const EPrime mid = split.e1(i, stages[i]);
      if (!(split.e1_inverse(i, mid) == stages[i])) {
        throw domain_error("E1 inverse fails the roundtrip at level " + std::to_string(i) + " on " +
                           detail::render_any(stages[i]));
      }
      if (!(split.e2(i, mid) == stages[i + 1])) {
        throw domain_error("E2 . E1 differs from E at level " + std::to_string(i));
      }
    }
  }
  typename function_system<EPrime, C>::maps m;
  m.id = std::string(source.id()) + "'";
  m.neutral = [source, split](std::size_t i) { return split.e1(i, source.neutral(i)); };
  m.project = [source, split](std::size_t i, const EPrime& y) { return source.project(i, split.e1_inverse(i, y)); };
  m.expand = [split](std::size_t i, const EPrime& y) { return split.e1(i + 1, split.e2(i, y)); };
  m.reconstruct = [source, split](std::size_t i, const C& c, const EPrime& next) -> std::optional<EPrime> {
    auto y = source.reconstruct(i, c, split.e1_inverse(i + 1, next));
    if (!y) return std::nullopt;
    return split.e1(i, *y);
  };
  m.is_neutral = [source, split](std::size_t i, const EPrime& y) {
    return source.is_neutral(i, split.e1_inverse(i, y));
  };
  m.validate = [source, split](const EPrime& y) { validate_input(source, split.e1_inverse(0, y)); };

  morphism_spec<E, C, EPrime, C> spec;
  spec.name = "shift(" + std::string(source.id()) + ")";
  spec.lambda_s = split.e1;
  spec.lambda_c = [](std::size_t, const C& c) { return c; };
  spec.claims_bijective = true;
  spec.inverse_s = split.e1_inverse;
  spec.inverse_c = spec.lambda_c;
  return {function_system<EPrime, C>(std::move(m)), std::move(spec)};
}

/// Decimal: multiply by 10, then take the fractional part.
inline expansion_split<rational, rational> decimal_split() {
  return {[](std::size_t, const rational& y) -> rational { return 10 * y; },
          [](std::size_t, const rational& y) -> rational { return y / 10; },
          [](std::size_t, const rational& y) -> rational { return y - floor(y); }};
}

/// Continued fraction: invert (0 -> inf), then take the fractional part.
inline expansion_split<rational, extended_rational> cf_split() {
  return {[](std::size_t, const rational& y) {
            return y == 0 ? extended_rational::infinity() : extended_rational(rational(1 / y));
          },
          [](std::size_t, const extended_rational& y) -> rational {
            return y.is_infinite() ? rational(0) : rational(1 / y.value());
          },
          [](std::size_t, const extended_rational& y) -> rational {
            return y.is_infinite() ? rational(0) : rational(y.value() - floor(y.value()));
          }};
}

/// Approximation system with the D transform: E1 = D, E2 = the power or
/// log nonlinearity of the normalised leading term.
inline expansion_split<power_series, power_series> as_d_split(const as_system& sys) {
  if (sys.config().transform != as_transform::d) throw domain_error("the D split needs the D transform");
  return {[](std::size_t, const power_series& y) { return y.derivative(); },
          [sys](std::size_t i, const power_series& y) { return y.integral(sys.level_constant(i)); },
          [sys](std::size_t i, const power_series& dy) {
            // E2 sees D y; E_i of any antiderivative of dy gives the same.
            return sys.expand(i, dy.integral(sys.level_constant(i)));
          }};
}

/// Digits of y in [0,10): P = floor, E = 10 frac.
class scaled_decimal_system {
 public:
  using element_type = rational;
  using coefficient_type = integer;

  std::string id() const { return "decimal-scaled"; }
  rational neutral(std::size_t) const { return 0; }
  bool is_neutral(std::size_t, const rational& y) const { return y == 0; }
  void validate(const rational& y) const {
    if (y < 0 || y >= 10) throw domain_error("element " + to_string(y) + " is outside [0,10)");
  }
  integer project(std::size_t, const rational& y) const { return floor(y); }
  rational expand(std::size_t, const rational& y) const { return 10 * (y - floor(y)); }
  std::optional<rational> reconstruct(std::size_t, const integer& c, const rational& next) const {
    if (c < 0 || c > 9 || next < 0 || next >= 10) return std::nullopt;
    return c + next / 10;
  }
};

/// Continued fraction on (1, inf]: P = floor (inf -> inf), E = 1/frac.
class cf_over_one_system {
 public:
  using element_type = extended_rational;
  using coefficient_type = extended_integer;

  std::string id() const { return "cf-over-one"; }
  extended_rational neutral(std::size_t) const { return extended_rational::infinity(); }
  bool is_neutral(std::size_t, const extended_rational& y) const { return y.is_infinite(); }
  void validate(const extended_rational& y) const {
    if (!y.is_infinite() && y.value() <= 1) throw domain_error("element " + to_string(y) + " is not above 1");
  }
  extended_integer project(std::size_t, const extended_rational& y) const {
    if (y.is_infinite()) return extended_integer::positive_infinity();
    return floor(y.value());
  }
  extended_rational expand(std::size_t, const extended_rational& y) const {
    if (y.is_infinite()) return y;
    const rational f = y.value() - floor(y.value());
    return f == 0 ? extended_rational::infinity() : extended_rational(rational(1 / f));
  }
  std::optional<extended_rational> reconstruct(std::size_t, const extended_integer& c,
                                               const extended_rational& next) const {
    if (!c.is_finite()) {
      if (c.classification() == extended_integer::kind::positive_infinity && next.is_infinite()) return next;
      return std::nullopt;
    }
    if (c.value() < 1) return std::nullopt;
    if (next.is_infinite()) {
      // (1, inf) would give 1, which is not above 1.
      if (c.value() == 1) return std::nullopt;
      return extended_rational(rational(c.value()));
    }
    if (next.value() <= 1) return std::nullopt;
    return extended_rational(rational(c.value() + 1 / next.value()));
  }
};

/// The primed form of a D-transform approximation system, on the
/// derivatives y' = D y:
///   P'(y') = (leading coefficient, M(y')),
///   E'(y') = D((y' / (c w^m))^alpha) or D(log(y' / (c w^m))).
class as_primed_system {
 public:
  using element_type = power_series;
  using coefficient_type = as_coefficient;

  explicit as_primed_system(as_system base) : base_(std::move(base)) {
    if (base_.config().transform != as_transform::d) throw domain_error("primed form needs the D transform");
  }

  std::string id() const { return base_.id() + "'"; }
  const as_system& base() const noexcept { return base_; }

  power_series neutral(std::size_t) const {
    return power_series::zero(base_.config().base_point, base_.config().series_order - 1);
  }
  bool is_neutral(std::size_t, const power_series& y) const { return y.is_zero(); }
  void validate(const power_series& y) const {
    if (y.base_point() != base_.config().base_point) throw domain_error("germ at the wrong base point");
  }

  as_coefficient project(std::size_t, const power_series& y) const {
    as_coefficient a;
    a.m = multiplicity(y, base_.config().zero_certainty);
    if (!a.m.is_infinite()) a.c = y[a.m.value()];
    return a;
  }

  power_series expand(std::size_t i, const power_series& y) const {
    const as_coefficient a = project(i, y);
    if (a.m.is_infinite()) return power_series::zero(y.base_point(), y.order() == 0 ? 0 : y.order() - 1);
    const power_series h = (1 / a.c) * y.shifted_down(a.m.value());
    if (base_.config().nonlinearity == as_nonlinearity::logexp) return series_log(h).derivative();
    return series_pow(h, base_.config().alpha(i)).derivative();
  }

  std::optional<power_series> reconstruct(std::size_t i, const as_coefficient& a, const power_series& next) const {
    if (next.base_point() != base_.config().base_point) return std::nullopt;
    if (a.b) return std::nullopt;
    if (a.m.is_infinite() || a.c == 0) {
      if (!(a.m.is_infinite() && a.c == 0) || !next.is_zero()) return std::nullopt;
      return power_series::zero(next.base_point(), next.order() + 1);
    }
    const power_series inner = next.integral(base_.level_constant(i + 1));
    const power_series g = base_.config().nonlinearity == as_nonlinearity::logexp
                               ? series_exp(inner)
                               : series_pow(inner, 1 / base_.config().alpha(i));
    power_series y = a.c * g.shifted_up(a.m.value());
    const std::size_t cap = base_.config().series_order - 1;
    return y.order() > cap ? y.truncated(cap) : y;
  }

 private:
  as_system base_;
};

/// Lambda_S = D, Lambda_C = id from an approximation system to its primed form.
inline morphism_spec<power_series, as_coefficient> as_derivative_morphism(const as_system& sys) {
  morphism_spec<power_series, as_coefficient> m;
  m.name = "as-d-shift";
  m.lambda_s = [](std::size_t, const power_series& y) { return y.derivative(); };
  m.lambda_c = [](std::size_t, const as_coefficient& c) { return c; };
  m.claims_bijective = true;
  m.inverse_s = [sys](std::size_t i, const power_series& y) { return y.integral(sys.level_constant(i)); };
  m.inverse_c = m.lambda_c;
  return m;
}

/// Lambda_S = 10 y, Lambda_C = id from the decimal system to digits of [0,10).
inline morphism_spec<rational, integer> decimal_scaling_morphism() {
  const auto s = decimal_split();
  return {"decimal-shift", s.e1, [](std::size_t, const integer& c) { return c; }, true, s.e1_inverse,
          [](std::size_t, const integer& c) { return c; }};
}

/// Lambda_S = 1/y (0 -> inf), Lambda_C = id from the continued fraction on
/// [0,1) to the one on (1, inf].
inline morphism_spec<rational, extended_integer, extended_rational, extended_integer> cf_inversion_morphism() {
  const auto s = cf_split();
  auto id = [](std::size_t, const extended_integer& c) { return c; };
  return {"cf-shift", s.e1, id, true, s.e1_inverse, id};
}

}  // namespace expsys
