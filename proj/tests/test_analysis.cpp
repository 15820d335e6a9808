#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "expsys/analysis/checks.hpp"
#include "expsys/analysis/report.hpp"
#include "expsys/real/systems.hpp"
#include "expsys/series/systems.hpp"

using namespace expsys;

namespace {

rational random_unit_rational(std::mt19937_64& rng, long max_den = 5000) {
  std::uniform_int_distribution<long> den(2, max_den);
  const long q = den(rng);
  return make_rational(std::uniform_int_distribution<long>(0, q - 1)(rng), q);
}

std::vector<std::pair<rational, rational>> random_pairs(std::size_t count, std::uint64_t seed, long max_den = 5000) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<rational, rational>> out;
  while (out.size() < count) {
    rational a = random_unit_rational(rng, max_den);
    rational b = random_unit_rational(rng, max_den);
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    out.emplace_back(a, b);
  }
  return out;
}

/// Decimal digits with 0 and 1 swapped.
function_system<rational, integer> shuffled_decimal() {
  function_system<rational, integer>::maps m;
  m.id = "decimal-shuffled";
  m.neutral = [](std::size_t) { return rational(0); };
  m.project = [](std::size_t, const rational& y) -> integer {
    const integer d = floor(10 * y);
    if (d == 0) return 1;
    if (d == 1) return 0;
    return d;
  };
  m.expand = [](std::size_t, const rational& y) -> rational {
    const rational t = 10 * y;
    return t - floor(t);
  };
  m.reconstruct = [](std::size_t, const integer& c, const rational& next) -> std::optional<rational> {
    const integer d = c == 0 ? integer(1) : (c == 1 ? integer(0) : c);
    return (d + next) / 10;
  };
  return function_system<rational, integer>(std::move(m));
}

const char* const pi_digits = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899";

}  // namespace

TEST_CASE("decimal convergence report of 1/3") {
  const base_system<> dec;
  const auto report = make_convergence_report(dec, make_rational(1, 3), 6, abs_metric{});
  CHECK(report.system_id == "decimal");
  CHECK(report.element == "1/3");
  CHECK(report.metric_id == "abs");
  REQUIRE(report.rows.size() == 7);
  for (std::size_t n = 0; n <= 6; ++n) {
    const auto& row = report.rows[n];
    CHECK(row.n == n);
    CHECK(row.proper());
    CHECK(parse_rational(*row.distance) == 1 / (3 * pow(rational(10), static_cast<long>(n))));
    CHECK(row.coeffs == std::vector<std::string>(n, "3"));
  }
  CHECK(distances_decrease(report, true));
}

TEST_CASE("finite order elements reach distance 0 at their order") {
  const base_system<> dec;
  const auto report = make_convergence_report(dec, make_rational(1, 8), 6, abs_metric{});
  for (const auto& row : report.rows) {
    if (row.n >= 3) CHECK(*row.distance == "0");
    else CHECK(*row.distance != "0");
  }
  const continued_fraction_system<> cf;
  const auto r2 = make_convergence_report(cf, make_rational(7, 10), 5, abs_metric{});
  CHECK(*r2.rows[3].distance == "0");
  CHECK(*r2.rows[5].distance == "0");
  CHECK(*r2.rows[2].distance != "0");
}

TEST_CASE("continued fraction of frac(pi) converges strictly") {
  const real_backend<certified_real> be{256};
  const continued_fraction_system<certified_real> cf(be);
  const certified_real y = certified_real::pi(256) - be.lift(3);
  const auto report = make_convergence_report(cf, y, 5, abs_metric{}, "frac(pi)");
  CHECK(report.element == "frac(pi)");
  CHECK(report.rows[5].coeffs == std::vector<std::string>{"7", "15", "1", "292", "1"});
  CHECK(distances_decrease(report, true));

  const rational pi = parse_decimal(pi_digits);
  const std::vector<rational> convergents = {0, make_rational(1, 7), make_rational(15, 106), make_rational(16, 113),
                                             make_rational(4687, 33102), make_rational(4703, 33215)};
  const rational slack = make_rational(1, 1000000) * pow(rational(10), -30);
  for (std::size_t n = 0; n <= 5; ++n) {
    // A code ending in 1 would reconstruct 1/(c+1), which is outside [0,1) at the last level.
    if (n == 3 || n == 5) {
      CHECK_FALSE(report.rows[n].proper());
      continue;
    }
    const auto [lo, hi] = distance_bounds(*report.rows[n].distance);
    const rational exact = abs(pi - 3 - convergents[n]);
    CHECK(lo <= exact + slack);
    CHECK(hi >= exact - slack);
    CHECK(hi - lo < rational(1, 1000000) * exact);
  }
}

TEST_CASE("improper rows carry no distance") {
  const norm_restricted_taylor_fixture fx;
  const polynomial y(std::vector<rational>{make_rational(1, 2), 1, -1, 1, -1});
  const auto report = make_convergence_report(fx, y, 5, coeff_head_metric{});
  CHECK(report.metric_id == "coeff-head");
  CHECK(report.rows[2].improper_at.has_value());
  CHECK_FALSE(report.rows[2].distance.has_value());
  CHECK(report.rows[3].proper());
  CHECK(report.rows[4].improper_at.has_value());
  CHECK(*report.rows[5].distance == "0");
}

TEST_CASE("coefficient-head distance is at most 2^-n for proper n") {
  std::mt19937_64 rng(3);
  const base_system<> dec;
  const continued_fraction_system<> cf;
  const egyptian_system<> eg;
  const engel_system<> en;
  auto check = [](const auto& sys, const auto& y) {
    const auto report = make_convergence_report(sys, y, 6, coeff_head_metric{});
    for (const auto& row : report.rows) {
      if (!row.distance) continue;
      CHECK(parse_rational(*row.distance) <= 1 / pow(rational(2), static_cast<long>(row.n)));
    }
  };
  for (int t = 0; t < 30; ++t) {
    const rational y = random_unit_rational(rng);
    check(dec, y);
    check(cf, y);
    check(eg, y);
    check(en, y);
  }
  const taylor_system tay(0, 24);
  std::vector<rational> e(25);
  rational f = 1;
  for (long k = 0; k <= 24; ++k) {
    e[static_cast<std::size_t>(k)] = 1 / f;
    f *= k + 1;
  }
  const power_series exp_germ(0, e);
  check(tay, exp_germ);
  const auto series = make_convergence_report(tay, exp_germ, 6, series_head_metric{});
  for (const auto& row : series.rows) CHECK(parse_rational(*row.distance) == 1 / pow(rational(2), static_cast<long>(row.n)));
}

TEST_CASE("path-sup metric against exact polynomial convergents") {
  const as_system sys({as_transform::d, as_nonlinearity::power, alpha_schedule::constant(make_rational(1, 2)), 0, 32,
                       {}, 2});
  std::vector<rational> c(33);
  rational binom = 1;
  for (long k = 0; k <= 32; ++k) {
    c[static_cast<std::size_t>(k)] = binom;
    binom = binom * (2 * k + 1) / (2 * (k + 1));
  }
  const power_series y(0, c);
  path_sup_metric metric;
  metric.points = {complex(0.25, 0), complex(0.5, 0)};
  metric.reference = [](complex z) { return 1.0 / std::sqrt(1.0 - z); };
  const auto report = make_convergence_report(sys, y, 4, metric);
  CHECK(report.metric_id == "path-sup");
  const auto code = coefficient_code_of(sys, y, 4);
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto yn = convergent(sys, code, n).value();
    double expect = 0;
    for (double x : {0.25, 0.5}) {
      const double exact_poly = yn.evaluate_offset(rational(x)).get_d();
      expect = std::max(expect, std::fabs(exact_poly - 1 / std::sqrt(1 - x)));
    }
    CHECK(std::stod(*report.rows[n].distance) == Catch::Approx(expect).margin(1e-8));
  }
  CHECK(partial_sum_reference(y)(complex(0.25, 0)).real() == Catch::Approx(1 / std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("CSV and JSON export") {
  convergence_report empty{"decimal", "0", "abs", {}};
  std::ostringstream csv;
  write_csv(csv, empty);
  CHECK(csv.str() == "n,proper,distance,coeffs\n");

  const auto report = make_convergence_report(continued_fraction_system<>{}, make_rational(7, 10), 4, abs_metric{});
  std::ostringstream c2;
  write_csv(c2, report);
  CHECK(c2.str() ==
        "n,proper,distance,coeffs\n"
        "0,true,7/10,\"\"\n"
        "1,false,,\"1\"\n"
        "2,true,1/30,\"1 2\"\n"
        "3,true,0,\"1 2 3\"\n"
        "4,true,0,\"1 2 3 inf\"\n");

  std::ostringstream j1;
  write_json(j1, report);
  std::istringstream in(j1.str());
  const auto back = read_json(in);
  CHECK(back == report);
  std::ostringstream j2;
  write_json(j2, back);
  CHECK(j2.str() == j1.str());
  CHECK(j1.str().find("\"system_id\": \"cf\"") != std::string::npos);
  CHECK(j1.str().find("\"system_id\"") < j1.str().find("\"element\""));

  const real_backend<certified_real> be{256};
  const continued_fraction_system<certified_real> cfc(be);
  const auto interval = make_convergence_report(cfc, certified_real::pi(256) - be.lift(3), 3, abs_metric{});
  std::ostringstream j3;
  write_json(j3, interval);
  std::istringstream in3(j3.str());
  std::ostringstream j4;
  write_json(j4, read_json(in3));
  CHECK(j4.str() == j3.str());
  std::ostringstream c3;
  write_csv(c3, interval);
  CHECK(c3.str().find(",\"[") != std::string::npos);

  std::istringstream bad("{\"system_id\": 1}");
  CHECK_THROWS_AS(read_json(bad), domain_error);
  std::istringstream junk("{");
  CHECK_THROWS_AS(read_json(junk), parse_error);
  CHECK_THROWS_AS(export_report(report, export_format::csv, "/nonexistent/dir/x.csv"), io_error);
}

TEST_CASE("decimal parsing of interval endpoints") {
  CHECK(parse_decimal("1.25e-3") == make_rational(1, 800));
  CHECK(parse_decimal("-2.5") == make_rational(-5, 2));
  CHECK(parse_decimal("7") == 7);
  CHECK(parse_decimal("3/4") == make_rational(3, 4));
  CHECK(distance_bounds("[1e-2,2e-2]") == std::pair<rational, rational>{make_rational(1, 100), make_rational(1, 50)});
}

TEST_CASE("monotonicity of digit systems") {
  const auto pairs = random_pairs(500, 77);
  auto levels_are = [](const auto& report, level_monotonicity want) {
    for (const auto& l : report.levels) {
      INFO(to_string(l.verdict));
      CHECK(l.verdict == want);
    }
  };
  const auto dec = monotonicity_check(base_system<>{}, pairs, 6);
  levels_are(dec, level_monotonicity::increasing);
  CHECK(dec.monotonic());
  levels_are(monotonicity_check(continued_fraction_system<>{}, pairs, 6), level_monotonicity::decreasing);
  levels_are(monotonicity_check(egyptian_system<>{}, pairs, 4), level_monotonicity::increasing);
  levels_are(monotonicity_check(engel_system<>{}, pairs, 4), level_monotonicity::increasing);

  const auto shuffled = monotonicity_check(shuffled_decimal(), pairs, 3);
  CHECK_FALSE(shuffled.monotonic());
  REQUIRE(shuffled.levels[0].verdict == level_monotonicity::violated);
  const auto [a, b] = *shuffled.levels[0].witness;
  CHECK(a < b);
  CHECK(floor(10 * a) <= 1);
  CHECK(floor(10 * b) <= 1);

  CHECK_THROWS_AS(monotonicity_check(base_system<>{}, {{make_rational(1, 2), make_rational(1, 3)}}, 2), domain_error);
  CHECK_FALSE(monotonicity_check(base_system<>{}, {}, 2).monotonic());
}

TEST_CASE("separation") {
  const base_system<> dec;
  const rational third = make_rational(1, 3);
  const auto r = separation_check(dec, {{third, third + 1 / pow(rational(10), 7)}}, 10);
  CHECK(r.first_levels == std::vector<std::optional<std::size_t>>{6});
  CHECK(r.separated());
  CHECK_FALSE(separation_check(dec, {{third, third + 1 / pow(rational(10), 12)}}, 10).separated());
  CHECK_THROWS_AS(separation_check(dec, {{third, third}}, 4), domain_error);

  const fourier_system fs;
  const auto base = trig_polynomial::cosine(1) + trig_polynomial::sine(2);
  const auto other = base + trig_polynomial::cosine(3);
  CHECK(first_difference(fs, base, other, 6) == std::optional<std::size_t>(3));
}

TEST_CASE("finite-order elements between random pairs") {
  const auto pairs = random_pairs(200, 5, 1000000);
  const base_system<> dec;
  const continued_fraction_system<> cf;
  const egyptian_system<> eg;
  const engel_system<> en;
  auto check = [](const auto& sys, const rational& a, const rational& b) {
    const auto w = finite_order_between(sys, a, b, 60);
    REQUIRE(w.has_value());
    CHECK(a < w->element);
    CHECK(w->element < b);
    CHECK(order(sys, w->element, 80) == order_result::finite(w->order));
  };
  for (const auto& [a, b] : pairs) {
    check(dec, a, b);
    check(cf, a, b);
    check(eg, a, b);
    check(en, a, b);
  }
}

TEST_CASE("monotone separating systems approach rationals") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const rational y = random_unit_rational(rng);
    CHECK(distances_decrease(make_convergence_report(continued_fraction_system<>{}, y, 12, abs_metric{}), true));
    CHECK(distances_decrease(make_convergence_report(egyptian_system<>{}, y, 6, abs_metric{}), true));
    CHECK(distances_decrease(make_convergence_report(engel_system<>{}, y, 8, abs_metric{}), true));
    CHECK(distances_decrease(make_convergence_report(base_system<>{}, y, 12, abs_metric{}), false));
  }
  // A zero digit leaves the decimal distance unchanged.
  const auto flat = make_convergence_report(base_system<>{}, make_rational(101, 1000) + make_rational(1, 30000), 3,
                                            abs_metric{});
  CHECK_FALSE(distances_decrease(flat, true));
  CHECK(distances_decrease(flat, false));
}

TEST_CASE("homomorphism reports serialize") {
  const auto report = verify_homomorphism(newton_reflection_morphism(), newton_forward_system{},
                                          newton_backward_system{}, {polynomial(std::vector<rational>{1, 2, 3})}, 4);
  const auto j = to_json(report);
  CHECK(j["passed"] == true);
  CHECK(j["violation"].is_null());
  CHECK(j["summary"] == "no violation found on 1 samples to depth 4");
  CHECK(j.dump().find("\"spec\":\"newton-reflection\"") == 1);
}
