#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstddef>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "expsys/approx/as_system.hpp"
#include "expsys/core/errors.hpp"

// Numerical evaluation of a convergent y^[n] along a polyline starting at
// x0. The nested integrals are discretised by composite Gauss-Legendre
// collocation: every level is sampled at the same panel nodes, and its
// antiderivative at those nodes comes from the spectral integration matrix
// of the panel. Panels are doubled until the values at the polyline
// vertices settle.

namespace expsys {

using complex = std::complex<double>;

struct quadrature_settings {
  double tol = 1e-10;
  std::size_t nodes_per_panel = 16;
  std::size_t initial_panels = 2;
  std::size_t max_panels = 1 << 12;
  /// |value| above this, or a zero base under a fractional power, counts
  /// as a singularity.
  double blowup = 1e12;
};

struct path_result {
  /// y^[n] at each polyline vertex.
  std::vector<complex> values;
  /// Largest change at any vertex under the last panel doubling.
  double error_estimate = 0;
  std::size_t panels_per_segment = 0;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1,1] and the matrix S with
/// S[j][k] = integral from -1 to x_j of the k-th Lagrange basis polynomial.
struct gauss_panel {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<std::vector<double>> s;

  explicit gauss_panel(std::size_t p) : x(p), w(p), s(p, std::vector<double>(p)) {
    // Legendre P_0..P_p at t.
    auto legendre = [p](double t) {
      std::vector<double> v(p + 1);
      v[0] = 1;
      if (p >= 1) v[1] = t;
      for (std::size_t l = 2; l <= p; ++l) {
        v[l] = ((2.0 * l - 1) * t * v[l - 1] - (l - 1.0) * v[l - 2]) / static_cast<double>(l);
      }
      return v;
    };
    for (std::size_t k = 0; k < p; ++k) {
      double t = std::cos(std::numbers::pi * (k + 0.75) / (p + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto v = legendre(t);
        const double dp = static_cast<double>(p) * (t * v[p] - v[p - 1]) / (t * t - 1);
        const double dt = v[p] / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-16) break;
      }
      const auto v = legendre(t);
      const double dp = static_cast<double>(p) * (t * v[p] - v[p - 1]) / (t * t - 1);
      x[p - 1 - k] = t;
      w[p - 1 - k] = 2 / ((1 - t * t) * dp * dp);
    }
    // Integral of P_l from -1 to t: t + 1 for l = 0, (P_{l+1} - P_{l-1})/(2l+1) otherwise.
    std::vector<std::vector<double>> pk(p);
    for (std::size_t k = 0; k < p; ++k) pk[k] = legendre(x[k]);
    for (std::size_t j = 0; j < p; ++j) {
      const auto pj = legendre(x[j]);
      std::vector<double> integral(p);
      integral[0] = x[j] + 1;
      for (std::size_t l = 1; l < p; ++l) integral[l] = (pj[l + 1] - pj[l - 1]) / (2.0 * l + 1);
      for (std::size_t k = 0; k < p; ++k) {
        double acc = 0;
        for (std::size_t l = 0; l < p; ++l) acc += (2.0 * l + 1) / 2 * w[k] * pk[k][l] * integral[l];
        s[j][k] = acc;
      }
    }
  }
};

/// z^r on the branch continued from the previous sample.
class continuous_power {
 public:
  explicit continuous_power(double r) : r_(r) {}

  complex operator()(complex z, double blowup) {
    const double mod = std::abs(z);
    if (!(mod > 1 / blowup) || !std::isfinite(mod)) throw singularity_on_path("base of a fractional power reaches 0");
    double a = std::arg(z);
    a += 2 * std::numbers::pi * std::round((arg_ - a) / (2 * std::numbers::pi));
    arg_ = a;
    return std::exp(r_ * complex(std::log(mod), a));
  }

 private:
  double r_;
  double arg_ = 0;
};

inline double to_double(const rational& q) { return q.get_d(); }

inline complex ipow(complex w, int m) {
  complex r = 1;
  for (int k = 0; k < m; ++k) r *= w;
  return r;
}

}  // namespace detail

/// Values of y^[n] at the vertices of `path` (path[0] must be x0).
inline path_result eval_convergent_path(const as_system& sys, std::span<const as_coefficient> code, std::size_t n,
                                        const std::vector<complex>& path, const quadrature_settings& q = {}) {
  const as_config& cfg = sys.config();
  if (code.size() < n) throw domain_error("code shorter than the requested order");
  if (path.empty()) throw domain_error("empty path");
  const complex x0(detail::to_double(cfg.base_point), 0);
  if (std::abs(path.front() - x0) != 0) throw domain_error("path must start at the base point");
  if (q.nodes_per_panel < 2) throw domain_error("need at least 2 nodes per panel");

  const detail::gauss_panel gp(q.nodes_per_panel);
  const std::size_t p = q.nodes_per_panel;
  const std::size_t segments = path.size() - 1;

  // One evaluation at a fixed panel count. Samples are ordered along the
  // path: per panel, its p nodes followed by its right end.
  auto evaluate = [&](std::size_t panels) {
    const std::size_t per_panel = p + 1;
    const std::size_t total = 1 + segments * panels * per_panel;
    std::vector<complex> z(total);
    std::vector<complex> dz(segments * panels);
    z[0] = path.front();
    std::size_t idx = 1;
    for (std::size_t s = 0; s < segments; ++s) {
      const complex a = path[s];
      const complex b = path[s + 1];
      const complex h = (b - a) / static_cast<double>(panels);
      for (std::size_t j = 0; j < panels; ++j) {
        const complex left = a + h * static_cast<double>(j);
        dz[s * panels + j] = h / 2.0;
        for (std::size_t k = 0; k < p; ++k) z[idx++] = left + h * ((gp.x[k] + 1) / 2);
        z[idx++] = left + h;
      }
    }

    std::vector<complex> next(total, complex(detail::to_double(sys.level_constant(n)), 0));
    std::vector<complex> cur(total);
    for (std::size_t i = n; i-- > 0;) {
      const as_coefficient& a = code[i];
      const double kappa = detail::to_double(sys.level_constant(i));
      const double b = a.b ? detail::to_double(*a.b) : 0.0;
      if (a.m.is_infinite()) {
        for (std::size_t t = 0; t < total; ++t) cur[t] = kappa + b * (z[t] - x0);
        std::swap(cur, next);
        continue;
      }
      const double c = detail::to_double(a.c);
      const int m = static_cast<int>(a.m.value());
      const bool logexp = cfg.nonlinearity == as_nonlinearity::logexp;
      detail::continuous_power root(logexp ? 1.0 : detail::to_double(1 / cfg.alpha(i)));
      auto g = [&](complex v) { return logexp ? std::exp(v) : root(v, q.blowup); };
      auto lead = [&](std::size_t t) {
        const complex w = z[t] - x0;
        return c * detail::ipow(w, m) * g(next[t]);
      };

      if (cfg.transform == as_transform::k) {
        for (std::size_t t = 0; t < total; ++t) cur[t] = kappa + lead(t);
      } else {
        std::vector<complex> f(total);
        for (std::size_t t = 0; t < total; ++t) f[t] = lead(t);
        complex acc = 0;
        cur[0] = kappa;
        std::size_t base = 1;
        for (std::size_t panel = 0; panel < segments * panels; ++panel, base += per_panel) {
          const complex h = dz[panel];
          for (std::size_t j = 0; j < p; ++j) {
            complex part = 0;
            for (std::size_t k = 0; k < p; ++k) part += gp.s[j][k] * f[base + k];
            cur[base + j] = kappa + b * (z[base + j] - x0) + acc + h * part;
          }
          complex full = 0;
          for (std::size_t k = 0; k < p; ++k) full += gp.w[k] * f[base + k];
          acc += h * full;
          cur[base + p] = kappa + b * (z[base + p] - x0) + acc;
        }
      }
      for (const auto& v : cur) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > q.blowup) {
          throw singularity_on_path("level " + std::to_string(i) + " blows up on the path");
        }
      }
      std::swap(cur, next);
    }

    std::vector<complex> vertices(path.size());
    vertices[0] = next[0];
    for (std::size_t s = 0; s < segments; ++s) vertices[s + 1] = next[(s + 1) * panels * per_panel];
    return vertices;
  };

  path_result result;
  std::size_t panels = std::max<std::size_t>(1, q.initial_panels);
  std::vector<complex> previous = evaluate(panels);
  while (true) {
    panels *= 2;
    std::vector<complex> refined = evaluate(panels);
    double est = 0;
    double scale = 1;
    for (std::size_t v = 0; v < refined.size(); ++v) {
      est = std::max(est, std::abs(refined[v] - previous[v]));
      scale = std::max(scale, std::abs(refined[v]));
    }
    if (est <= q.tol * scale) {
      result.values = std::move(refined);
      result.error_estimate = est;
      result.panels_per_segment = panels;
      return result;
    }
    if (panels * 2 > q.max_panels) {
      throw quadrature_failure("error estimate " + std::to_string(est) + " above tolerance with " +
                               std::to_string(panels) + " panels per segment");
    }
    previous = std::move(refined);
  }
}

/// "re+im i" with 17 significant digits.
inline std::string render_complex(complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

struct grid_point {
  complex z;
  std::optional<complex> value;
  double error_estimate = 0;
  /// "ok" or the error kind that stopped the evaluation.
  std::string status = "ok";
};

/// y^[n] at each point along the straight segment from x0.
inline std::vector<grid_point> eval_grid(const as_system& sys, std::span<const as_coefficient> code, std::size_t n,
                                         const std::vector<complex>& points, const quadrature_settings& q = {}) {
  const complex x0(detail::to_double(sys.config().base_point), 0);
  std::vector<grid_point> out;
  out.reserve(points.size());
  for (const complex& z : points) {
    grid_point g{z, std::nullopt, 0, "ok"};
    try {
      if (z == x0) {
        g.value = complex(detail::to_double(sys.level_constant(0)), 0);
      } else {
        const auto r = eval_convergent_path(sys, code, n, {x0, z}, q);
        g.value = r.values.back();
        g.error_estimate = r.error_estimate;
      }
    } catch (const error& e) {
      g.status = e.kind();
    }
    out.push_back(std::move(g));
  }
  return out;
}

/// Header "point,value,error,status"; failed points leave value and error empty.
inline void write_grid_csv(std::ostream& os, const std::vector<grid_point>& grid) {
  os << "point,value,error,status\n";
  for (const auto& g : grid) {
    os << render_complex(g.z) << ",";
    if (g.value) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", g.error_estimate);
      os << render_complex(*g.value) << "," << buf;
    } else {
      os << ",";
    }
    os << "," << g.status << "\n";
  }
}

}  // namespace expsys
