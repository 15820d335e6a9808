#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expsys/core/errors.hpp"

// An expansion system is a sequence of levels i = 0, 1, 2, ...; at each level
// an element y is split by F_i = (P_i, E_i) into a coefficient P_i(y) and the
// next-level element E_i(y). Reconstruction inverts F_i on its image and
// reports "improper" (nullopt) for pairs outside that image.

namespace expsys {

template <class S>
concept expansion_system =
    requires { typename S::element_type; typename S::coefficient_type; } &&
    std::equality_comparable<typename S::element_type> &&
    std::equality_comparable<typename S::coefficient_type> &&
    requires(const S& sys, std::size_t level, const typename S::element_type& y,
             const typename S::coefficient_type& c) {
      { sys.id() } -> std::convertible_to<std::string>;
      { sys.neutral(level) } -> std::same_as<typename S::element_type>;
      { sys.is_neutral(level, y) } -> std::same_as<bool>;
      { sys.project(level, y) } -> std::same_as<typename S::coefficient_type>;
      { sys.expand(level, y) } -> std::same_as<typename S::element_type>;
      { sys.reconstruct(level, c, y) } -> std::same_as<std::optional<typename S::element_type>>;
    };

template <expansion_system S>
using element_t = typename S::element_type;

template <expansion_system S>
using coefficient_t = typename S::coefficient_type;

/// Level-0 domain check; systems opt in with a `validate(y)` member that
/// throws domain_error.
template <expansion_system S>
void validate_input(const S& sys, const element_t<S>& y) {
  if constexpr (requires { sys.validate(y); }) sys.validate(y);
}

/// Finite prefix (c_0, ..., c_{depth-1}) of the coefficient sequence.
template <class C>
struct coefficient_code {
  std::string system_id;
  std::vector<C> values;

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const coefficient_code&, const coefficient_code&) = default;
};

/// Outcome of the backward pass: proper, or the first level (scanning
/// downward from n-1) at which reconstruction was rejected.
class properness {
 public:
  static properness proper() { return properness(); }
  static properness improper_at(std::size_t level) { return properness(level); }

  bool is_proper() const noexcept { return !failing_level_.has_value(); }
  std::size_t failing_level() const { return failing_level_.value(); }

  friend bool operator==(const properness&, const properness&) = default;

 private:
  properness() = default;
  explicit properness(std::size_t level) : failing_level_(level) {}
  std::optional<std::size_t> failing_level_;
};

/// All stages y_i^[n] of the backward pass, indexed by level i. Stages below
/// a failing level are empty.
template <class E>
struct convergent_trace {
  std::size_t order = 0;
  std::vector<std::optional<E>> stages;
  properness verdict = properness::proper();

  bool is_proper() const noexcept { return verdict.is_proper(); }

  /// y^[n]; throws domain_error when the pass was improper.
  const E& value() const {
    if (!is_proper()) {
      throw domain_error("convergent of order " + std::to_string(order) + " is improper at level " +
                         std::to_string(verdict.failing_level()));
    }
    return *stages.front();
  }
};

/// Finite(n) or "no neutral stage up to max_depth".
class order_result {
 public:
  static order_result finite(std::size_t n) { return order_result(n, true); }
  static order_result infinite_up_to(std::size_t max_depth) { return order_result(max_depth, false); }

  bool is_finite() const noexcept { return finite_; }
  /// The order when finite, otherwise the depth that was searched.
  std::size_t value() const noexcept { return value_; }

  friend bool operator==(const order_result&, const order_result&) = default;

 private:
  order_result(std::size_t v, bool finite) : value_(v), finite_(finite) {}
  std::size_t value_;
  bool finite_;
};

/// y_0 = y, y_{i+1} = E_i(y_i); returns depth + 1 stages.
template <expansion_system S>
std::vector<element_t<S>> trajectory(const S& sys, const element_t<S>& y, std::size_t depth) {
  validate_input(sys, y);
  std::vector<element_t<S>> stages;
  stages.reserve(depth + 1);
  stages.push_back(y);
  for (std::size_t i = 0; i < depth; ++i) stages.push_back(sys.expand(i, stages.back()));
  return stages;
}

template <expansion_system S>
coefficient_code<coefficient_t<S>> coefficient_code_of(const S& sys, const element_t<S>& y, std::size_t depth) {
  validate_input(sys, y);
  coefficient_code<coefficient_t<S>> code{std::string(sys.id()), {}};
  code.values.reserve(depth);
  element_t<S> current = y;
  for (std::size_t i = 0; i < depth; ++i) {
    code.values.push_back(sys.project(i, current));
    if (i + 1 < depth) current = sys.expand(i, current);
  }
  return code;
}

/// Backward pass from the neutral element of level n through the first n
/// coefficients. Any system whose coefficient type matches may be used, so a
/// code extracted on one backend can be reconstructed on another.
template <expansion_system S>
convergent_trace<element_t<S>> convergent(const S& sys, std::span<const coefficient_t<S>> code, std::size_t n) {
  if (code.size() < n) {
    throw domain_error("convergent of order " + std::to_string(n) + " needs " + std::to_string(n) +
                       " coefficients, got " + std::to_string(code.size()));
  }
  convergent_trace<element_t<S>> trace;
  trace.order = n;
  trace.stages.resize(n + 1);
  trace.stages[n] = sys.neutral(n);
  for (std::size_t i = n; i-- > 0;) {
    auto previous = sys.reconstruct(i, code[i], *trace.stages[i + 1]);
    if (!previous) {
      trace.verdict = properness::improper_at(i);
      return trace;
    }
    trace.stages[i] = std::move(*previous);
  }
  return trace;
}

template <expansion_system S>
convergent_trace<element_t<S>> convergent(const S& sys, const coefficient_code<coefficient_t<S>>& code,
                                          std::size_t n) {
  return convergent(sys, std::span<const coefficient_t<S>>(code.values), n);
}

template <expansion_system S>
order_result order(const S& sys, const element_t<S>& y, std::size_t max_depth) {
  validate_input(sys, y);
  element_t<S> current = y;
  for (std::size_t i = 0;; ++i) {
    if (sys.is_neutral(i, current)) return order_result::finite(i);
    if (i == max_depth) return order_result::infinite_up_to(max_depth);
    current = sys.expand(i, current);
  }
}

struct profile_entry {
  std::size_t order;
  properness verdict;
  friend bool operator==(const profile_entry&, const profile_entry&) = default;
};

/// Properness verdict of every order 0..n_max against the code of y.
template <expansion_system S>
std::vector<profile_entry> properness_profile(const S& sys, const element_t<S>& y, std::size_t n_max) {
  const auto code = coefficient_code_of(sys, y, n_max);
  std::vector<profile_entry> profile;
  profile.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) profile.push_back({n, convergent(sys, code, n).verdict});
  return profile;
}

/// True iff reconstruct(i, P_i y_i, E_i y_i) == y_i along the trajectory.
template <expansion_system S>
bool roundtrip_check(const S& sys, const element_t<S>& y, std::size_t depth) {
  validate_input(sys, y);
  element_t<S> current = y;
  for (std::size_t i = 0; i < depth; ++i) {
    auto next = sys.expand(i, current);
    auto back = sys.reconstruct(i, sys.project(i, current), next);
    if (!back || !(*back == current)) return false;
    current = std::move(next);
  }
  return true;
}

/// A proper convergent y^[n] has the same first n coefficients as y. Returns
/// nullopt when the convergent is improper (nothing to compare).
template <expansion_system S>
std::optional<bool> convergent_keeps_prefix(const S& sys, const element_t<S>& y, std::size_t n) {
  const auto code = coefficient_code_of(sys, y, n);
  const auto trace = convergent(sys, code, n);
  if (!trace.is_proper()) return std::nullopt;
  return coefficient_code_of(sys, trace.value(), n).values == code.values;
}

/// Expansion system assembled from callables. Used for ad-hoc systems in
/// tests and for the output of shift_isomorphism.
template <class E, class C>
class function_system {
 public:
  using element_type = E;
  using coefficient_type = C;

  struct maps {
    std::string id;
    std::function<E(std::size_t)> neutral;
    std::function<C(std::size_t, const E&)> project;
    std::function<E(std::size_t, const E&)> expand;
    std::function<std::optional<E>(std::size_t, const C&, const E&)> reconstruct;
    std::function<bool(std::size_t, const E&)> is_neutral;  // optional: defaults to == neutral(i)
    std::function<void(const E&)> validate;                  // optional
  };

  explicit function_system(maps m) : maps_(std::move(m)) {}

  std::string id() const { return maps_.id; }
  E neutral(std::size_t i) const { return maps_.neutral(i); }
  bool is_neutral(std::size_t i, const E& y) const {
    return maps_.is_neutral ? maps_.is_neutral(i, y) : y == maps_.neutral(i);
  }
  C project(std::size_t i, const E& y) const { return maps_.project(i, y); }
  E expand(std::size_t i, const E& y) const { return maps_.expand(i, y); }
  std::optional<E> reconstruct(std::size_t i, const C& c, const E& next) const {
    return maps_.reconstruct(i, c, next);
  }
  void validate(const E& y) const {
    if (maps_.validate) maps_.validate(y);
  }

 private:
  maps maps_;
};

}  // namespace expsys
