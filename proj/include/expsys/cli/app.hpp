#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expsys/analysis/checks.hpp"
#include "expsys/analysis/report.hpp"
#include "expsys/approx/as_system.hpp"
#include "expsys/approx/path_eval.hpp"
#include "expsys/cli/expression.hpp"
#include "expsys/core/errors.hpp"
#include "expsys/core/system.hpp"
#include "expsys/morph/morphism.hpp"
#include "expsys/real/systems.hpp"
#include "expsys/series/systems.hpp"

// The expsys command line: a registry of named systems and thin
// subcommands over the library operations.

namespace expsys::cli {

/// A convergent the subcommand needed was improper.
class improper_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "improper"; }
};

class usage_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "usage"; }
};

enum exit_code : int {
  exit_ok = 0,
  exit_violation = 1,
  exit_input = 2,
  exit_precision = 3,
  exit_improper = 4,
};

inline int exit_code_for(const error& e) {
  const std::string k = e.kind();
  if (k == "improper") return exit_improper;
  if (k == "precision-exhausted" || k == "truncation-inconclusive" || k == "quadrature-failure" ||
      k == "singularity-on-path") {
    return exit_precision;
  }
  return exit_input;
}

/// Decimal approximation with `digits` significant digits.
inline std::string approx_decimal(const rational& q, int digits) {
  mpfr_t m;
  mpfr_init2(m, static_cast<mpfr_prec_t>(digits * 4 + 32));
  mpfr_set_q(m, q.get_mpq_t(), MPFR_RNDN);
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, m);
  std::string s(raw);
  mpfr_free_str(raw);
  mpfr_clear(m);
  return s;
}

inline std::string approx_decimal(const certified_real& x, int digits) {
  mpfr_t m;
  mpfr_init2(m, x.precision() + 1);
  mpfr_add(m, x.lower(), x.upper(), MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, m);
  std::string s(raw);
  mpfr_free_str(raw);
  mpfr_clear(m);
  return s;
}

inline std::string approx_decimal(const extended_rational& x, int digits) {
  return x.is_infinite() ? std::string("inf") : approx_decimal(x.value(), digits);
}

struct trace_view {
  properness verdict = properness::proper();
  std::vector<std::optional<std::string>> stages;
  std::optional<std::string> value;
  std::optional<std::string> approx;
};

struct system_entry {
  std::string id;
  expr_context context = expr_context::scalar;
  std::string summary;
  std::function<std::vector<std::string>(const element_value&, std::size_t)> expand;
  std::function<trace_view(const element_value&, std::size_t, int)> convergent;
  std::function<order_result(const element_value&, std::size_t)> order;
  std::function<convergence_report(const element_value&, std::size_t, const std::string&, const std::string&)> report;
};

namespace detail {

template <class S, class M>
concept metric_for = requires(const S& s, const element_t<S>& y, const coefficient_code<coefficient_t<S>>& c, M m) {
  { m.distance(s, y, y, c, std::size_t{}) } -> std::convertible_to<std::string>;
};

template <expansion_system S>
convergence_report report_with(const S& sys, const element_t<S>& y, std::size_t n_max, const std::string& metric,
                               const std::string& element) {
  if (metric == "abs") {
    if constexpr (metric_for<S, abs_metric>) {
      return make_convergence_report(sys, y, n_max, abs_metric{}, element);
    }
  } else if (metric == "coeff-head") {
    return make_convergence_report(sys, y, n_max, coeff_head_metric{}, element);
  } else if (metric == "series-head") {
    if constexpr (metric_for<S, series_head_metric>) {
      return make_convergence_report(sys, y, n_max, series_head_metric{}, element);
    }
  } else {
    throw usage_error("unknown metric '" + metric + "' (abs, coeff-head, series-head, path-sup)");
  }
  throw unsupported_in_context("metric " + metric + " does not apply to " + std::string(sys.id()));
}

template <class T>
std::optional<std::string> approx_of(const T& v, int digits) {
  if (digits <= 0) return std::nullopt;
  if constexpr (requires { approx_decimal(v, digits); }) {
    return approx_decimal(v, digits);
  } else {
    return std::nullopt;
  }
}

/// `dispatch(value, k)` calls k(system, element) with the concrete types.
template <class Dispatch>
system_entry make_entry(std::string id, expr_context ctx, std::string summary, Dispatch dispatch) {
  system_entry e;
  e.id = std::move(id);
  e.context = ctx;
  e.summary = std::move(summary);
  e.expand = [dispatch](const element_value& v, std::size_t depth) {
    std::vector<std::string> out;
    dispatch(v, [&](const auto& sys, const auto& y) {
      for (const auto& c : coefficient_code_of(sys, y, depth).values) out.push_back(expsys::detail::render_any(c));
    });
    return out;
  };
  e.convergent = [dispatch](const element_value& v, std::size_t n, int digits) {
    trace_view view;
    dispatch(v, [&](const auto& sys, const auto& y) {
      const auto trace = convergent(sys, coefficient_code_of(sys, y, n), n);
      view.verdict = trace.verdict;
      for (const auto& s : trace.stages) view.stages.push_back(s ? std::optional<std::string>(expsys::detail::render_any(*s)) : std::nullopt);
      if (trace.is_proper()) {
        view.value = expsys::detail::render_any(trace.value());
        view.approx = approx_of(trace.value(), digits);
      }
    });
    return view;
  };
  e.order = [dispatch](const element_value& v, std::size_t max_depth) {
    std::optional<order_result> r;
    dispatch(v, [&](const auto& sys, const auto& y) { r = expsys::order(sys, y, max_depth); });
    return *r;
  };
  e.report = [dispatch](const element_value& v, std::size_t n_max, const std::string& metric,
                        const std::string& element) {
    std::optional<convergence_report> r;
    dispatch(v, [&](const auto& sys, const auto& y) { r = report_with(sys, y, n_max, metric, element); });
    return *r;
  };
  return e;
}

[[noreturn]] inline void wrong_kind(const std::string& id, const std::string& want) {
  throw unsupported_in_context("system " + id + " needs " + want);
}

/// Real-number systems with an exact and a certified backend.
template <class MakeExact, class MakeCertified>
system_entry real_entry(const std::string& id, const std::string& summary, MakeExact exact, MakeCertified certified) {
  return make_entry(id, expr_context::scalar, summary, [id, exact, certified](const element_value& v, auto&& k) {
    if (const auto* q = std::get_if<rational>(&v)) {
      k(exact(), *q);
    } else if (const auto* x = std::get_if<certified_real>(&v)) {
      k(certified(real_backend<certified_real>{x->precision()}), *x);
    } else {
      wrong_kind(id, "a real number");
    }
  });
}

template <class Make>
system_entry exact_real_entry(const std::string& id, const std::string& summary, Make make) {
  return make_entry(id, expr_context::scalar, summary, [id, make](const element_value& v, auto&& k) {
    const auto* q = std::get_if<rational>(&v);
    if (!q) wrong_kind(id, "an exact rational");
    make(*q, k);
  });
}

}  // namespace detail

/// Every system reachable through --system.
inline std::vector<system_entry> system_registry() {
  using namespace detail;
  std::vector<system_entry> r;
  r.push_back(real_entry(
      "decimal", "decimal digits on [0,1)", [] { return base_system<rational>(10); },
      [](real_backend<certified_real> be) { return base_system<certified_real>(10, be); }));
  r.push_back(real_entry(
      "base2", "binary digits on [0,1)", [] { return base_system<rational>(2); },
      [](real_backend<certified_real> be) { return base_system<certified_real>(2, be); }));
  r.push_back(real_entry(
      "cf", "regular continued fraction on [0,1)", [] { return continued_fraction_system<rational>(); },
      [](real_backend<certified_real> be) { return continued_fraction_system<certified_real>(be); }));
  r.push_back(real_entry(
      "egyptian", "greedy Egyptian fraction on [0,1)", [] { return egyptian_system<rational>(); },
      [](real_backend<certified_real> be) { return egyptian_system<certified_real>(be); }));
  r.push_back(real_entry(
      "engel", "Engel expansion on [0,1)", [] { return engel_system<rational>(); },
      [](real_backend<certified_real> be) { return engel_system<certified_real>(be); }));
  r.push_back(real_entry(
      "decimal-ext", "decimal exponent, then digits, on [0,inf)", [] { return decimal_ext_system<rational>(); },
      [](real_backend<certified_real> be) { return decimal_ext_system<certified_real>(be); }));
  r.push_back(real_entry(
      "f:scale10", "f-expansion with f(y) = 10y", [] { return f_expansion_system<rational>(scaling_f_spec<rational>(10)); },
      [](real_backend<certified_real> be) {
        return f_expansion_system<certified_real>(scaling_f_spec<certified_real>(10, be), be);
      }));
  r.push_back(real_entry(
      "f:reciprocal", "f-expansion with f(y) = 1/y",
      [] { return f_expansion_system<rational>(reciprocal_f_spec<rational>()); },
      [](real_backend<certified_real> be) {
        return f_expansion_system<certified_real>(reciprocal_f_spec<certified_real>(be), be);
      }));
  r.push_back(exact_real_entry("decimal-scaled", "decimal digits on [0,10)",
                               [](const rational& q, auto&& k) { k(scaled_decimal_system{}, q); }));
  r.push_back(exact_real_entry("cf-over-one", "continued fraction on (1,inf]", [](const rational& q, auto&& k) {
    k(cf_over_one_system{}, extended_rational(q));
  }));
  r.push_back(make_entry("taylor", expr_context::series, "Taylor coefficients of a germ",
                         [](const element_value& v, auto&& k) {
                           const auto* y = std::get_if<power_series>(&v);
                           if (!y) wrong_kind("taylor", "a series");
                           k(taylor_system(y->base_point(), y->order()), *y);
                         }));
  auto poly = [](const std::string& id, const std::string& summary, auto sys) {
    return make_entry(id, expr_context::polynomial, summary, [id, sys](const element_value& v, auto&& k) {
      const auto* y = std::get_if<polynomial>(&v);
      if (!y) wrong_kind(id, "a polynomial");
      k(sys, *y);
    });
  };
  r.push_back(poly("newton-forward", "Newton forward differences at 0", newton_forward_system{}));
  r.push_back(poly("newton-backward", "Newton backward differences at 0", newton_backward_system{}));
  r.push_back(poly("taylor-norm-fixture", "Taylor on [0,1] restricted to the unit ball", norm_restricted_taylor_fixture{}));
  r.push_back(make_entry("fourier", expr_context::trig, "Fourier modes -i, +i of a trigonometric polynomial",
                         [](const element_value& v, auto&& k) {
                           const auto* y = std::get_if<trig_polynomial>(&v);
                           if (!y) wrong_kind("fourier", "a trigonometric polynomial");
                           k(fourier_system{}, *y);
                         }));
  return r;
}

inline const system_entry& find_system(const std::vector<system_entry>& reg, const std::string& id) {
  for (const auto& e : reg) {
    if (e.id == id) return e;
  }
  throw usage_error("unknown system '" + id + "' (see 'systems list')");
}

/// "1/2" constant, "2,1/3,5" list (last value repeats), or an expression in
/// the level index i such as "1/(i+2)".
inline alpha_schedule parse_alpha_schedule(const std::string& text) {
  if (text.find(',') != std::string::npos) {
    std::vector<rational> values;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const element_value parsed = parse_expression(part, {});
      const auto* v = std::get_if<rational>(&parsed);
      if (!v) throw unsupported_in_context("alpha values must be exact rationals");
      values.push_back(*v);
    }
    return alpha_schedule::list(std::move(values));
  }
  if (text.find('i') != std::string::npos) return alpha_schedule(parse_index_expression(text), text);
  const element_value v = parse_expression(text, {});
  const auto* q = std::get_if<rational>(&v);
  if (!q) throw unsupported_in_context("alpha must be an exact rational");
  return alpha_schedule::constant(*q);
}

inline std::vector<complex> parse_path(const std::string& text, char sep) {
  std::vector<complex> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    const complex_rational z = parse_complex(part);
    out.emplace_back(z.re.get_d(), z.im.get_d());
  }
  if (out.empty()) throw usage_error("empty path");
  return out;
}

/// "lo:hi:count" into count equally spaced values.
inline std::vector<double> parse_range(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
    throw usage_error("range '" + text + "' is not lo:hi:count");
  }
  const double lo = parse_decimal(a).get_d();
  const double hi = parse_decimal(b).get_d();
  const long n = std::stol(c);
  if (n < 1) throw usage_error("range count must be positive");
  std::vector<double> out;
  for (long j = 0; j < n; ++j) out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1));
  return out;
}

namespace detail {

/// Flags from a JSON config file, skipping keys given on the command line.
inline std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("config: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  if (!j.is_object()) throw usage_error("config must be a JSON object");
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    const bool present = std::any_of(given.begin(), given.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number_integer()) {
      out.push_back(flag);
      out.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      out.push_back(flag);
      out.push_back(value.dump());
    } else {
      throw usage_error("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return out;
}

inline std::vector<polynomial> sample_polynomials(std::mt19937_64& rng, std::size_t count) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 4);
  std::uniform_int_distribution<int> deg(0, 7);
  std::vector<polynomial> out;
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& a : c) a = make_rational(num(rng), den(rng));
    out.emplace_back(std::move(c));
  }
  return out;
}

inline std::vector<rational> sample_unit_rationals(std::mt19937_64& rng, std::size_t count) {
  std::uniform_int_distribution<long> den(2, 5000);
  std::vector<rational> out;
  for (std::size_t s = 0; s < count; ++s) {
    const long d = den(rng);
    out.push_back(make_rational(std::uniform_int_distribution<long>(0, d - 1)(rng), d));
  }
  return out;
}

inline std::vector<power_series> sample_germs(std::mt19937_64& rng, std::size_t count, const rational& constant,
                                              std::size_t order) {
  std::uniform_int_distribution<long> num(1, 3);
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<power_series> out;
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<rational> c(order + 1);
    c[0] = constant;
    const std::size_t zeros = coin(rng) == 0 ? 2 : 0;
    for (std::size_t k = zeros + 1; k <= order; ++k) {
      c[k] = make_rational(coin(rng) < 2 ? num(rng) : -num(rng), num(rng));
    }
    out.emplace_back(rational(0), std::move(c));
  }
  return out;
}

}  // namespace detail

inline const std::vector<std::string>& morphism_specs() {
  static const std::vector<std::string> names = {"newton-reflection", "decimal-shift", "cf-shift", "as-d-shift"};
  return names;
}

/// Runs a built-in morphism on seeded random samples.
inline homomorphism_report verify_builtin_morphism(const std::string& name, std::size_t samples, std::size_t depth,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (name == "newton-reflection") {
    return verify_homomorphism(newton_reflection_morphism(), newton_forward_system{}, newton_backward_system{},
                               detail::sample_polynomials(rng, samples), depth);
  }
  if (name == "decimal-shift") {
    return verify_homomorphism(decimal_scaling_morphism(), base_system<>{}, scaled_decimal_system{},
                               detail::sample_unit_rationals(rng, samples), depth);
  }
  if (name == "cf-shift") {
    return verify_homomorphism(cf_inversion_morphism(), continued_fraction_system<>{}, cf_over_one_system{},
                               detail::sample_unit_rationals(rng, samples), depth);
  }
  if (name == "as-d-shift") {
    as_config cfg;
    cfg.alpha = alpha_schedule::constant(rational(1, 2));
    cfg.series_order = 16;
    const as_system sys(cfg);
    return verify_homomorphism(as_derivative_morphism(sys), sys, as_primed_system(sys),
                               detail::sample_germs(rng, samples, 1, 16), depth);
  }
  throw usage_error("unknown morphism '" + name + "'");
}

namespace detail {

struct as_options {
  std::string transform = "d";
  std::string nonlinearity = "power";
  std::string alpha = "1";
  std::string input;
  std::size_t series_order = 64;
  std::string level0_constant;

  void attach(CLI::App* app) {
    app->add_option("--transform", transform, "d, k or kd")->check(CLI::IsMember({"d", "k", "kd"}));
    app->add_option("--nonlinearity", nonlinearity, "power or logexp")->check(CLI::IsMember({"power", "logexp"}));
    app->add_option("--alpha", alpha, "constant, comma list, or expression in i");
    app->add_option("--input", input, "germ, e.g. \"1/sqrt(1-x)\" or \"pow(1/2) at 1\"")->required();
    app->add_option("--series-order", series_order, "truncation order N");
    app->add_option("--level0-constant", level0_constant, "constant term at level 0 (defaults to the input's)");
  }

  std::pair<as_system, power_series> build() const {
    as_config cfg;
    cfg.transform = transform == "d" ? as_transform::d : (transform == "k" ? as_transform::k : as_transform::kd);
    cfg.nonlinearity = nonlinearity == "logexp" ? as_nonlinearity::logexp : as_nonlinearity::power;
    cfg.alpha = parse_alpha_schedule(alpha);
    cfg.series_order = series_order;
    expr_options opt;
    opt.context = expr_context::series;
    opt.series_order = series_order;
    power_series y = std::get<power_series>(parse_expression(input, opt));
    cfg.base_point = y.base_point();
    const rational convention = cfg.nonlinearity == as_nonlinearity::power ? rational(1) : rational(0);
    if (!level0_constant.empty()) {
      const auto v = parse_expression(level0_constant, {});
      const auto* q = std::get_if<rational>(&v);
      if (!q) throw unsupported_in_context("level-0 constant must be an exact rational");
      cfg.level0_constant = *q;
    } else if (y.constant_term() != convention) {
      cfg.level0_constant = y.constant_term();
    }
    return {as_system(cfg), std::move(y)};
  }
};

inline std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i == 0 ? "" : sep) + v[i];
  return out;
}

inline void write_report(const convergence_report& report, const std::string& format, const std::string& out_path,
                         std::ostream& out) {
  const export_format f = format == "json" ? export_format::json : export_format::csv;
  if (out_path.empty() || out_path == "-") {
    if (f == export_format::csv) {
      write_csv(out, report);
    } else {
      write_json(out, report);
    }
  } else {
    export_report(report, f, out_path);
  }
}

}  // namespace detail

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App app{"Expansion systems: coefficient codes, convergents, morphisms and approximation systems"};
  app.name(argc > 0 ? "expsys" : "expsys");
  app.require_subcommand(1);
  int approx_digits = 0;
  app.add_option("--approx", approx_digits, "also print convergent values to this many significant digits");

  auto sub = [](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  CLI::App* systems = sub(&app, "systems", "system registry");
  systems->require_subcommand(1);
  CLI::App* systems_list = sub(systems, "list", "list system ids");

  std::string system_id;
  std::string input;
  std::size_t depth = 0;
  std::size_t order_n = 0;
  std::size_t max_depth = 0;
  long bits = 256;
  std::size_t series_order = 64;
  std::string emit = "value";
  auto common = [&](CLI::App* s) {
    s->add_option("--system", system_id, "system id")->required();
    s->add_option("--input", input, "input expression")->required();
    s->add_option("--bits", bits, "interval precision for real inputs");
    s->add_option("--series-order", series_order, "truncation order for series inputs");
  };

  CLI::App* expand = sub(&app, "expand", "coefficient code");
  common(expand);
  expand->add_option("--depth", depth, "number of coefficients")->required();

  CLI::App* conv = sub(&app, "convergent", "n-th convergent");
  common(conv);
  conv->add_option("--order", order_n, "n")->required();
  conv->add_option("--emit", emit, "value or trace")->check(CLI::IsMember({"value", "trace"}));

  CLI::App* ord = sub(&app, "order", "order of an element");
  common(ord);
  ord->add_option("--max", max_depth, "search depth")->required();

  std::size_t n_max = 0;
  std::string metric = "abs";
  std::string out_path;
  std::string format = "csv";
  CLI::App* rep = sub(&app, "report", "convergence report");
  common(rep);
  rep->add_option("--nmax", n_max, "largest n")->required();
  rep->add_option("--metric", metric, "abs, coeff-head or series-head");
  rep->add_option("--out", out_path, "output file (stdout when omitted)");
  rep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* morph = sub(&app, "morphism", "homomorphism checks");
  morph->require_subcommand(1);
  CLI::App* morph_list = sub(morph, "list", "list built-in morphisms");
  CLI::App* verify = sub(morph, "verify", "verify a built-in morphism on random samples");
  std::string spec;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::string verify_format = "text";
  verify->add_option("--spec", spec, "morphism name")->required();
  verify->add_option("--samples", samples, "number of samples");
  verify->add_option("--depth", depth, "levels to check")->required();
  verify->add_option("--seed", seed, "sample seed");
  verify->add_option("--format", verify_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  CLI::App* as = sub(&app, "as", "approximation systems");
  as->require_subcommand(1);
  detail::as_options aso;
  CLI::App* as_run = sub(as, "run", "coefficient code of a germ");
  aso.attach(as_run);
  as_run->add_option("--depth", depth, "number of coefficients")->required();
  std::optional<std::size_t> show_convergent;
  std::optional<std::size_t> show_nested;
  as_run->add_option("--convergent", show_convergent, "also print y^[n] as a series");
  as_run->add_option("--nested", show_nested, "also print y^[n] in nested form");

  std::string path_text;
  double tol = 1e-10;
  CLI::App* as_eval = sub(as, "eval", "evaluate y^[n] along a polyline from x0");
  aso.attach(as_eval);
  as_eval->add_option("--path", path_text, "comma separated complex nodes, starting at x0")->required();
  as_eval->add_option("--order", order_n, "n")->required();
  as_eval->add_option("--tol", tol, "quadrature tolerance");

  std::string points_text;
  std::string re_range;
  std::string im_range;
  CLI::App* as_grid = sub(as, "grid", "evaluate y^[n] on a grid of points");
  aso.attach(as_grid);
  as_grid->add_option("--points", points_text, "semicolon separated complex points");
  as_grid->add_option("--re", re_range, "lo:hi:count");
  as_grid->add_option("--im", im_range, "lo:hi:count");
  as_grid->add_option("--order", order_n, "n")->required();
  as_grid->add_option("--tol", tol, "quadrature tolerance");
  as_grid->add_option("--out", out_path, "CSV file (stdout when omitted)");

  CLI::App* as_report = sub(as, "report", "convergence report of a germ");
  aso.attach(as_report);
  as_report->add_option("--nmax", n_max, "largest n")->required();
  as_report->add_option("--metric", metric, "coeff-head, series-head or path-sup");
  as_report->add_option("--points", points_text, "semicolon separated complex points for path-sup");
  as_report->add_option("--tol", tol, "quadrature tolerance");
  as_report->add_option("--out", out_path, "output file (stdout when omitted)");
  as_report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    // --config FILE: JSON keyed like the flags; flags on the command line win.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        continue;
      }
      const auto extra = detail::config_arguments(path, args);
      args.insert(args.end(), extra.begin(), extra.end());
      break;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      throw usage_error(e.what());
    }

    const auto registry = system_registry();
    auto read_input = [&](const system_entry& e) {
      expr_options opt;
      opt.context = e.context;
      opt.series_order = series_order;
      opt.bits = bits;
      return parse_expression(input, opt);
    };

    if (*systems_list) {
      for (const auto& e : registry) out << e.id << "  " << to_string(e.context) << "  " << e.summary << "\n";
      out << "as-<transform>-<nonlinearity>[alpha]  series  approximation systems (see 'as run')\n";
      return exit_ok;
    }
    if (*expand) {
      const auto& e = find_system(registry, system_id);
      out << detail::join(e.expand(read_input(e), depth)) << "\n";
      return exit_ok;
    }
    if (*conv) {
      const auto& e = find_system(registry, system_id);
      const trace_view t = e.convergent(read_input(e), order_n, approx_digits);
      if (emit == "trace") {
        for (std::size_t i = 0; i < t.stages.size(); ++i) {
          out << "stage " << i << ": " << (t.stages[i] ? *t.stages[i] : std::string("-")) << "\n";
        }
        out << "verdict: "
            << (t.verdict.is_proper() ? std::string("proper")
                                      : "improper at level " + std::to_string(t.verdict.failing_level()))
            << "\n";
      }
      if (!t.verdict.is_proper()) {
        throw improper_error("convergent of order " + std::to_string(order_n) + " is improper at level " +
                             std::to_string(t.verdict.failing_level()));
      }
      out << *t.value;
      if (t.approx) out << " ~ " << *t.approx;
      out << "\n";
      return exit_ok;
    }
    if (*ord) {
      const auto& e = find_system(registry, system_id);
      const order_result r = e.order(read_input(e), max_depth);
      if (r.is_finite()) {
        out << r.value() << "\n";
      } else {
        out << "none up to " << r.value() << "\n";
      }
      return exit_ok;
    }
    if (*rep) {
      const auto& e = find_system(registry, system_id);
      detail::write_report(e.report(read_input(e), n_max, metric, input), format, out_path, out);
      return exit_ok;
    }
    if (*morph_list) {
      for (const auto& name : morphism_specs()) out << name << "\n";
      return exit_ok;
    }
    if (*verify) {
      const auto r = verify_builtin_morphism(spec, samples, depth, seed);
      if (verify_format == "json") {
        out << to_json(r).dump(2) << "\n";
      } else {
        out << r.spec_name << ": " << r.source_id << " -> " << r.target_id << "\n";
        out << "checks: " << r.checks << "\n";
        out << r.summary() << "\n";
      }
      return r.passed() ? exit_ok : exit_violation;
    }
    if (*as_run) {
      const auto [sys, y] = aso.build();
      const auto code = coefficient_code_of(sys, y, depth);
      std::vector<std::string> all, cs, ms, bs;
      for (const auto& a : code.values) {
        all.push_back(to_string(a));
        cs.push_back(to_string(a.c));
        ms.push_back(to_string(a.m));
        if (a.b) bs.push_back(to_string(*a.b));
      }
      out << "system " << sys.id() << "\n";
      out << "code " << detail::join(all) << "\n";
      if (!bs.empty()) out << "offsets " << detail::join(bs) << "\n";
      out << "coefficients " << detail::join(cs) << "\n";
      out << "multiplicities " << detail::join(ms) << "\n";
      const auto cycle = detect_cycle(code, depth / 2);
      out << "cycle " << (cycle ? std::to_string(*cycle) : std::string("none")) << "\n";
      auto need_proper = [&](std::size_t n) {
        const auto c = coefficient_code_of(sys, y, n);
        auto t = convergent(sys, c, n);
        if (!t.is_proper()) {
          throw improper_error("convergent of order " + std::to_string(n) + " is improper at level " +
                               std::to_string(t.verdict.failing_level()));
        }
        return std::make_pair(c, t.value());
      };
      if (show_convergent) out << "convergent " << to_string(need_proper(*show_convergent).second) << "\n";
      if (show_nested) {
        const auto [c, v] = need_proper(*show_nested);
        out << "nested " << render_nested(sys, c.values, *show_nested) << "\n";
      }
      return exit_ok;
    }
    quadrature_settings q;
    q.tol = tol;
    if (*as_eval) {
      const auto [sys, y] = aso.build();
      const auto code = coefficient_code_of(sys, y, order_n);
      const auto path = parse_path(path_text, ',');
      const auto r = eval_convergent_path(sys, code.values, order_n, path, q);
      for (std::size_t v = 0; v < path.size(); ++v) out << render_complex(path[v]) << " " << render_complex(r.values[v]) << "\n";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", r.error_estimate);
      out << "error-estimate " << buf << " panels " << r.panels_per_segment << "\n";
      return exit_ok;
    }
    if (*as_grid) {
      const auto [sys, y] = aso.build();
      std::vector<complex> points;
      if (!points_text.empty()) points = parse_path(points_text, ';');
      if (!re_range.empty()) {
        const auto re = parse_range(re_range);
        const auto im = im_range.empty() ? std::vector<double>{0.0} : parse_range(im_range);
        for (double b : im) {
          for (double a : re) points.emplace_back(a, b);
        }
      }
      if (points.empty()) throw usage_error("as grid needs --points or --re");
      const auto code = coefficient_code_of(sys, y, order_n);
      const auto grid = eval_grid(sys, code.values, order_n, points, q);
      if (out_path.empty() || out_path == "-") {
        write_grid_csv(out, grid);
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw io_error("cannot open " + out_path + " for writing");
        write_grid_csv(f, grid);
      }
      return exit_ok;
    }
    if (*as_report) {
      const auto [sys, y] = aso.build();
      convergence_report r;
      if (metric == "path-sup") {
        if (points_text.empty()) throw usage_error("path-sup needs --points");
        path_sup_metric m;
        m.points = parse_path(points_text, ';');
        m.reference = partial_sum_reference(y);
        m.quadrature = q;
        r = make_convergence_report(sys, y, n_max, m, aso.input);
      } else {
        r = detail::report_with(sys, y, n_max, metric == "abs" ? std::string("coeff-head") : metric, aso.input);
      }
      detail::write_report(r, format, out_path, out);
      return exit_ok;
    }
    throw usage_error("no subcommand");
  } catch (const error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error[" << e.kind() << "]: " << msg << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error[internal]: " << msg << "\n";
    return exit_input;
  }
}

}  // namespace expsys::cli
