#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expsys/core/errors.hpp"
#include "expsys/core/system.hpp"
#include "expsys/morph/morphism.hpp"

// Sample-based checks of monotonicity, separation and density.

namespace expsys {

enum class level_monotonicity { unclassified, increasing, decreasing, violated };

inline std::string to_string(level_monotonicity m) {
  switch (m) {
    case level_monotonicity::unclassified: return "unclassified";
    case level_monotonicity::increasing: return "increasing";
    case level_monotonicity::decreasing: return "decreasing";
    case level_monotonicity::violated: return "violated";
  }
  return "?";
}

template <class E>
struct monotonicity_level {
  level_monotonicity verdict = level_monotonicity::unclassified;
  /// Stages at this level of two pairs that F_i orders in opposite ways.
  std::optional<std::pair<E, E>> witness;
  std::optional<std::pair<E, E>> counter_witness;
};

template <class E>
struct monotonicity_report {
  std::vector<monotonicity_level<E>> levels;

  bool monotonic() const {
    for (const auto& l : levels) {
      if (l.verdict == level_monotonicity::unclassified || l.verdict == level_monotonicity::violated) return false;
    }
    return !levels.empty();
  }
};

namespace detail {

template <class T>
int compare3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

template <class S>
constexpr bool reversed_coefficients() {
  if constexpr (requires { S::reversed_coefficient_order; }) {
    return S::reversed_coefficient_order;
  } else {
    return false;
  }
}

}  // namespace detail

/// Classifies every F_i = (P_i, E_i) on the level-i stages of the sample
/// pairs, using the dictionary order on C_i x S_{i+1}. Coefficients are
/// compared in reverse for systems that declare reversed_coefficient_order.
/// Pairs whose stages coincide carry no information at that level.
template <expansion_system S>
  requires std::totally_ordered<element_t<S>> && std::totally_ordered<coefficient_t<S>>
monotonicity_report<element_t<S>> monotonicity_check(
    const S& sys, const std::vector<std::pair<element_t<S>, element_t<S>>>& pairs, std::size_t depth) {
  using E = element_t<S>;
  monotonicity_report<E> report;
  report.levels.resize(depth);
  std::vector<std::optional<std::pair<E, E>>> inc(depth);
  std::vector<std::optional<std::pair<E, E>>> dec(depth);
  for (const auto& [a, b] : pairs) {
    if (!(a < b)) throw domain_error("sample pairs must be ordered y < y'");
    const auto sa = trajectory(sys, a, depth);
    const auto sb = trajectory(sys, b, depth);
    for (std::size_t i = 0; i < depth; ++i) {
      const int order_in = detail::compare3(sa[i], sb[i]);
      if (order_in == 0) continue;
      int order_out = detail::compare3(sys.project(i, sa[i]), sys.project(i, sb[i]));
      if (detail::reversed_coefficients<S>()) order_out = -order_out;
      if (order_out == 0) order_out = detail::compare3(sa[i + 1], sb[i + 1]);
      auto& slot = order_out == order_in ? inc[i] : dec[i];
      if (order_out != 0 && !slot) slot = std::pair<E, E>(sa[i], sb[i]);
    }
  }
  for (std::size_t i = 0; i < depth; ++i) {
    auto& level = report.levels[i];
    if (inc[i] && dec[i]) {
      level.verdict = level_monotonicity::violated;
      level.witness = dec[i];
      level.counter_witness = inc[i];
    } else if (inc[i]) {
      level.verdict = level_monotonicity::increasing;
    } else if (dec[i]) {
      level.verdict = level_monotonicity::decreasing;
    }
  }
  return report;
}

/// First level at which the codes of y and y' differ, or none up to depth.
template <expansion_system S>
std::optional<std::size_t> first_difference(const S& sys, const element_t<S>& a, const element_t<S>& b,
                                            std::size_t depth) {
  if (a == b) throw domain_error("separation needs distinct elements");
  const auto ca = coefficient_code_of(sys, a, depth);
  const auto cb = coefficient_code_of(sys, b, depth);
  for (std::size_t i = 0; i < depth; ++i) {
    if (!(ca.values[i] == cb.values[i])) return i;
  }
  return std::nullopt;
}

struct separation_report {
  /// Per pair: first differing level, or nullopt when none to depth.
  std::vector<std::optional<std::size_t>> first_levels;
  std::size_t depth = 0;

  bool separated() const {
    for (const auto& l : first_levels) {
      if (!l) return false;
    }
    return true;
  }
};

template <expansion_system S>
separation_report separation_check(const S& sys, const std::vector<std::pair<element_t<S>, element_t<S>>>& pairs,
                                   std::size_t depth) {
  separation_report report;
  report.depth = depth;
  for (const auto& [a, b] : pairs) report.first_levels.push_back(first_difference(sys, a, b, depth));
  return report;
}

template <class E>
struct order_witness {
  E element;
  std::size_t order = 0;
};

/// An element of finite order strictly between a < b: the first convergent
/// of the midpoint that lands inside (a, b) and has finite order.
template <expansion_system S>
  requires std::totally_ordered<element_t<S>>
std::optional<order_witness<element_t<S>>> finite_order_between(const S& sys, const element_t<S>& a,
                                                               const element_t<S>& b, std::size_t max_order) {
  if (!(a < b)) throw domain_error("need a < b");
  const element_t<S> mid = (a + b) / 2;
  const auto code = coefficient_code_of(sys, mid, max_order);
  for (std::size_t n = 0; n <= max_order; ++n) {
    const auto trace = convergent(sys, code, n);
    if (!trace.is_proper()) continue;
    const element_t<S> z = trace.value();
    if (!(a < z && z < b)) continue;
    const auto ord = order(sys, z, n + 1);
    if (ord.is_finite()) return order_witness<element_t<S>>{z, ord.value()};
  }
  return std::nullopt;
}

}  // namespace expsys
