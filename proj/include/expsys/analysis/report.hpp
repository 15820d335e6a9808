#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "expsys/approx/as_system.hpp"
#include "expsys/approx/path_eval.hpp"
#include "expsys/core/errors.hpp"
#include "expsys/core/numeric.hpp"
#include "expsys/core/system.hpp"
#include "expsys/morph/morphism.hpp"
#include "expsys/real/certified_real.hpp"

// Convergence reports: y against y^[n] for n = 0..n_max under an explicit
// metric, with CSV and JSON export. Distances are kept as their canonical
// text so that exported reports re-export byte for byte.

namespace expsys {

class io_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "io-error"; }
};

struct report_row {
  std::size_t n = 0;
  /// Level at which the backward reconstruction left the image of F.
  std::optional<std::size_t> improper_at;
  /// Empty for improper rows.
  std::optional<std::string> distance;
  /// First min(n, 8) coefficients of the code of y.
  std::vector<std::string> coeffs;

  bool proper() const noexcept { return !improper_at.has_value(); }
  friend bool operator==(const report_row&, const report_row&) = default;
};

struct convergence_report {
  std::string system_id;
  std::string element;
  std::string metric_id;
  std::vector<report_row> rows;

  friend bool operator==(const convergence_report&, const convergence_report&) = default;
};

/// |y - y^[n]| on exact rationals and certified intervals.
struct abs_metric {
  std::string id() const { return "abs"; }

  template <expansion_system S, class C>
  std::string distance(const S&, const rational& y, const rational& yn, const coefficient_code<C>&,
                       std::size_t) const {
    return to_string(abs(y - yn));
  }

  template <expansion_system S, class C>
  std::string distance(const S&, const certified_real& y, const certified_real& yn, const coefficient_code<C>&,
                       std::size_t) const {
    const certified_real d = y - yn;
    return to_string(d.sign() < 0 ? -d : d);
  }
};

/// 2^-k where k is the first index at which the codes of y and y^[n]
/// differ, looking `lookahead` levels beyond n; 0 when y^[n] == y. If no
/// difference shows up within the lookahead the bound 2^-(n+lookahead) is
/// reported.
struct coeff_head_metric {
  std::size_t lookahead = 8;

  std::string id() const { return "coeff-head"; }

  template <expansion_system S, class C>
  std::string distance(const S& sys, const element_t<S>& y, const element_t<S>& yn, const coefficient_code<C>& code,
                       std::size_t n) const {
    if (yn == y) return "0";
    const std::size_t depth = n + lookahead;
    const auto mine = code.values.size() >= depth ? code : coefficient_code_of(sys, y, depth);
    const auto theirs = coefficient_code_of(sys, yn, depth);
    std::size_t k = 0;
    while (k < depth && mine.values[k] == theirs.values[k]) ++k;
    return to_string(rational(1) / pow(rational(2), static_cast<long>(k)));
  }
};

/// 2^-k where k is the first differing Taylor coefficient of two germs
/// (0 when equal through the common order).
struct series_head_metric {
  std::string id() const { return "series-head"; }

  template <expansion_system S, class C>
  std::string distance(const S&, const power_series& y, const power_series& yn, const coefficient_code<C>&,
                       std::size_t) const {
    const std::size_t top = std::min(y.order(), yn.order());
    for (std::size_t k = 0; k <= top; ++k) {
      if (y[k] != yn[k]) return to_string(rational(1) / pow(rational(2), static_cast<long>(k)));
    }
    return "0";
  }
};

/// max over grid points of |y^[n](z) - reference(z)|, with y^[n] evaluated
/// numerically along the segment from x0. Only for approximation systems.
struct path_sup_metric {
  std::vector<complex> points;
  std::function<complex(complex)> reference;
  quadrature_settings quadrature;

  std::string id() const { return "path-sup"; }

  std::string distance(const as_system& sys, const power_series&, const power_series&,
                       const coefficient_code<as_coefficient>& code, std::size_t n) const {
    const complex x0(sys.config().base_point.get_d(), 0);
    double sup = 0;
    for (const complex& z : points) {
      const complex v = z == x0 ? complex(sys.level_constant(0).get_d(), 0)
                                : eval_convergent_path(sys, code.values, n, {x0, z}, quadrature).values.back();
      sup = std::max(sup, std::abs(v - reference(z)));
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", sup);
    return buf;
  }
};

/// Reference values from the partial sum of a germ.
inline std::function<complex(complex)> partial_sum_reference(const power_series& y) {
  std::vector<complex> c;
  for (const auto& a : y.coefficients()) c.emplace_back(a.get_d(), 0);
  const complex x0(y.base_point().get_d(), 0);
  return [c, x0](complex z) {
    complex acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * (z - x0) + c[k];
    return acc;
  };
}

template <expansion_system S, class Metric>
convergence_report make_convergence_report(const S& sys, const element_t<S>& y, std::size_t n_max,
                                           const Metric& metric, std::string element = {}) {
  convergence_report report;
  report.system_id = sys.id();
  report.element = element.empty() ? detail::render_any(y) : std::move(element);
  report.metric_id = metric.id();
  const auto code = coefficient_code_of(sys, y, n_max);
  for (std::size_t n = 0; n <= n_max; ++n) {
    report_row row;
    row.n = n;
    for (std::size_t k = 0; k < std::min<std::size_t>(n, 8); ++k) row.coeffs.push_back(detail::render_any(code.values[k]));
    const auto trace = convergent(sys, code, n);
    if (trace.is_proper()) {
      row.distance = metric.distance(sys, y, trace.value(), code, n);
    } else {
      row.improper_at = trace.verdict.failing_level();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Exact value of a decimal literal such as "-1.25e-3", "7" or "3/4".
inline rational parse_decimal(const std::string& text) {
  if (text.find('/') != std::string::npos) return parse_rational(text);
  std::size_t e = text.find_first_of("eE");
  const std::string mantissa = text.substr(0, e);
  long exponent = 0;
  if (e != std::string::npos) {
    try {
      exponent = std::stol(text.substr(e + 1));
    } catch (const std::exception&) {
      throw domain_error("not a decimal literal: '" + text + "'");
    }
  }
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_point) throw domain_error("not a decimal literal: '" + text + "'");
      seen_point = true;
    } else {
      digits += ch;
      if (seen_point && ch != '-' && ch != '+') ++scale;
    }
  }
  rational q = parse_rational(digits);
  return q * pow(rational(10), exponent - scale);
}

/// [lo, hi] enclosing a distance cell: "p/q", a decimal, or "[lo,hi]".
inline std::pair<rational, rational> distance_bounds(const std::string& text) {
  if (!text.empty() && text.front() == '[') {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos || text.back() != ']') throw domain_error("bad interval '" + text + "'");
    return {parse_decimal(text.substr(1, comma - 1)), parse_decimal(text.substr(comma + 1, text.size() - comma - 2))};
  }
  const rational q = parse_decimal(text);
  return {q, q};
}

/// Distances over the proper rows never increase. With `strict`, every
/// nonzero distance is certainly below the one before it.
inline bool distances_decrease(const convergence_report& report, bool strict) {
  std::optional<std::pair<rational, rational>> prev;
  for (const auto& row : report.rows) {
    if (!row.distance) continue;
    const auto cur = distance_bounds(*row.distance);
    if (prev) {
      const bool zero_now = cur.second == 0;
      if (strict && !zero_now) {
        if (!(cur.second < prev->first)) return false;
      } else if (cur.first > prev->second) {
        return false;
      }
    }
    prev = cur;
  }
  return true;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n ") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

/// Header "n,proper,distance,coeffs"; the coeffs cell is the
/// space-separated coefficient head.
inline void write_csv(std::ostream& os, const convergence_report& report) {
  os << "n,proper,distance,coeffs\n";
  for (const auto& row : report.rows) {
    std::string coeffs;
    for (const auto& c : row.coeffs) coeffs += (coeffs.empty() ? "" : " ") + c;
    os << row.n << "," << (row.proper() ? "true" : "false") << ","
       << (row.distance ? detail::csv_quote(*row.distance) : "") << ",\"" << coeffs << "\"\n";
  }
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const convergence_report& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["n"] = row.n;
    r["proper"] = row.proper();
    r["improper_at"] = row.improper_at ? ordered_json(*row.improper_at) : ordered_json(nullptr);
    r["distance"] = row.distance ? ordered_json(*row.distance) : ordered_json(nullptr);
    r["coeffs"] = row.coeffs;
    rows.push_back(std::move(r));
  }
  ordered_json j;
  j["system_id"] = report.system_id;
  j["element"] = report.element;
  j["metric_id"] = report.metric_id;
  j["rows"] = std::move(rows);
  return j;
}

inline convergence_report report_from_json(const ordered_json& j) {
  try {
    convergence_report report;
    report.system_id = j.at("system_id").get<std::string>();
    report.element = j.at("element").get<std::string>();
    report.metric_id = j.at("metric_id").get<std::string>();
    for (const auto& r : j.at("rows")) {
      report_row row;
      row.n = r.at("n").get<std::size_t>();
      if (!r.at("improper_at").is_null()) row.improper_at = r.at("improper_at").get<std::size_t>();
      if (!r.at("distance").is_null()) row.distance = r.at("distance").get<std::string>();
      row.coeffs = r.at("coeffs").get<std::vector<std::string>>();
      if (r.at("proper").get<bool>() != row.proper()) throw domain_error("row " + std::to_string(row.n) + " is inconsistent");
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw domain_error(std::string("malformed report: ") + e.what());
  }
}

inline void write_json(std::ostream& os, const convergence_report& report) { os << to_json(report).dump(2) << "\n"; }

inline convergence_report read_json(std::istream& is) {
  ordered_json j;
  try {
    j = ordered_json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  return report_from_json(j);
}

enum class export_format { csv, json };

inline void export_report(const convergence_report& report, export_format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  if (format == export_format::csv) {
    write_csv(out, report);
  } else {
    write_json(out, report);
  }
  if (!out) throw io_error("write to " + path + " failed");
}

inline ordered_json to_json(const homomorphism_report& report) {
  ordered_json j;
  j["spec"] = report.spec_name;
  j["source_id"] = report.source_id;
  j["target_id"] = report.target_id;
  j["samples"] = report.samples;
  j["depth"] = report.depth;
  j["checks"] = report.checks;
  j["passed"] = report.passed();
  if (report.violation) {
    ordered_json v;
    v["equation"] = report.violation->equation;
    v["level"] = report.violation->level;
    v["sample"] = report.violation->sample ? ordered_json(*report.violation->sample) : ordered_json(nullptr);
    v["detail"] = report.violation->detail;
    j["violation"] = std::move(v);
  } else {
    j["violation"] = nullptr;
  }
  j["summary"] = report.summary();
  return j;
}

}  // namespace expsys
