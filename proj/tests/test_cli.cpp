#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "expsys/cli/app.hpp"

using namespace expsys;

namespace {

struct cli_result {
  int code = 0;
  std::string out;
  std::string err;
};

cli_result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "expsys");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  cli_result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("expsys_test_" + name)).string();
}

rational binomial(const rational& a, long k) {
  rational r = 1;
  for (long j = 0; j < k; ++j) r = r * (a - j) / (j + 1);
  return r;
}

expr_options series_opts(std::size_t order) {
  expr_options o;
  o.context = expr_context::series;
  o.series_order = order;
  return o;
}

}  // namespace

TEST_CASE("scalar expressions stay exact when possible") {
  const auto v = parse_expression("355/113", {});
  REQUIRE(std::holds_alternative<rational>(v));
  CHECK(std::get<rational>(v) == make_rational(355, 113));
  CHECK(std::get<rational>(parse_expression("0.125", {})) == make_rational(1, 8));
  CHECK(std::get<rational>(parse_expression("2^-3 + 1/2", {})) == make_rational(5, 8));
  CHECK(std::get<rational>(parse_expression("sqrt(9/4)", {})) == make_rational(3, 2));

  const auto s = parse_expression("1/sqrt(2)", {});
  REQUIRE(std::holds_alternative<certified_real>(s));
  const certified_real& x = std::get<certified_real>(s);
  CHECK(x.precision() == 256);
  CHECK(mpfr_cmp_d(x.lower(), 0.70710678118654746) > 0);
  CHECK(mpfr_cmp_d(x.upper(), 0.70710678118654757) < 0);

  const auto p = std::get<certified_real>(parse_expression("pi - 3", {}));
  CHECK(mpfr_cmp_d(p.lower(), 0.14159265358979) > 0);
  CHECK(mpfr_cmp_d(p.upper(), 0.14159265358980) < 0);
}

TEST_CASE("series builtins match closed-form coefficients") {
  const auto e = std::get<power_series>(parse_expression("exp", series_opts(5)));
  rational fact = 1;
  REQUIRE(e.order() == 5);
  for (std::size_t k = 0; k <= 5; ++k) {
    if (k > 0) fact *= static_cast<long>(k);
    CHECK(e[k] == 1 / fact);
  }

  const auto root = std::get<power_series>(parse_expression("pow(1/2) at 1", series_opts(12)));
  CHECK(root.base_point() == 1);
  for (long k = 0; k <= 12; ++k) CHECK(root[static_cast<std::size_t>(k)] == binomial(make_rational(1, 2), k));

  const auto l = std::get<power_series>(parse_expression("log(1+x)", series_opts(10)));
  CHECK(l[0] == 0);
  for (long k = 1; k <= 10; ++k) CHECK(l[static_cast<std::size_t>(k)] == make_rational(k % 2 ? 1 : -1, k));

  const auto inv = std::get<power_series>(parse_expression("1/sqrt(1-x)", series_opts(10)));
  for (long k = 0; k <= 10; ++k) {
    const rational oracle = binomial(make_rational(-1, 2), k) * (k % 2 ? -1 : 1);
    CHECK(inv[static_cast<std::size_t>(k)] == oracle);
  }

  // tan x: 1, 1/3, 2/15, 17/315, 62/2835 on the odd powers.
  const auto t = std::get<power_series>(parse_expression("tan x", series_opts(9)));
  const std::vector<rational> tan_odd = {1, make_rational(1, 3), make_rational(2, 15), make_rational(17, 315),
                                         make_rational(62, 2835)};
  for (std::size_t j = 0; j < tan_odd.size(); ++j) {
    CHECK(t[2 * j] == 0);
    CHECK(t[2 * j + 1] == tan_odd[j]);
  }

  const auto list = std::get<power_series>(parse_expression("[1, 2, 1/3] at 2", series_opts(4)));
  CHECK(list.base_point() == 2);
  CHECK(list[2] == make_rational(1, 3));
}

TEST_CASE("polynomial, trig and index contexts") {
  expr_options o;
  o.context = expr_context::polynomial;
  const auto p = std::get<polynomial>(parse_expression("x^3 - x", o));
  CHECK(p == polynomial({0, -1, 0, 1}));
  CHECK(std::get<polynomial>(parse_expression("2x(x+1)", o)) == polynomial({0, 2, 2}));

  o.context = expr_context::trig;
  CHECK(std::get<trig_polynomial>(parse_expression("cos(2x)", o)) == trig_polynomial::cosine(2));
  CHECK(std::get<trig_polynomial>(parse_expression("sin(3x)", o)) == trig_polynomial::sine(3));

  const auto f = parse_index_expression("1/(i+2)");
  CHECK(f(0) == make_rational(1, 2));
  CHECK(f(2) == make_rational(1, 4));

  const auto z = parse_complex("1/2-3/4i");
  CHECK(z.re == make_rational(1, 2));
  CHECK(z.im == make_rational(-3, 4));
}

TEST_CASE("expression errors carry positions and kinds") {
  try {
    (void)parse_expression("3/(", {});
    FAIL("no error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 3);
  }
  try {
    (void)parse_expression("1 + 2)", {});
    FAIL("no error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(parse_expression("1/3 at 1", {}), unsupported_in_context);
  CHECK_THROWS_AS(parse_expression("sin(1)", {}), unsupported_in_context);
  CHECK_THROWS_AS(parse_expression("log(x)", series_opts(4)), unsupported_in_context);
  CHECK_THROWS_AS(parse_expression("frobnicate(2)", {}), unsupported_in_context);
}

TEST_CASE("cli goldens") {
  auto r = run_cli({"expand", "--system", "cf", "--input", "7/10", "--depth", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 2 3 inf\n");
  CHECK(r.err.empty());

  r = run_cli({"expand", "--system", "egyptian", "--input", "1/sqrt(2)", "--depth", "4", "--bits", "256"});
  CHECK(r.code == 0);
  CHECK(r.out == "2 5 141 68575\n");

  r = run_cli({"as", "run", "--transform", "d", "--nonlinearity", "power", "--alpha", "1/2", "--input", "1/sqrt(1-x)",
               "--depth", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\ncoefficients 1/2 3/4 7/8\n") != std::string::npos);
  CHECK(r.out.find("\nmultiplicities 0 0 0\n") != std::string::npos);

  r = run_cli({"as", "run", "--alpha", "-1", "--input", "exp", "--depth", "6", "--series-order", "16"});
  CHECK(r.out.find("\ncycle 2\n") != std::string::npos);

  r = run_cli({"expand", "--system", "taylor", "--input", "exp", "--depth", "6", "--series-order", "5"});
  CHECK(r.out == "1 1 1/2 1/6 1/24 1/120\n");

  r = run_cli({"expand", "--system", "newton-forward", "--input", "x^3-x", "--depth", "4"});
  CHECK(r.out == "0 0 6 6\n");
  r = run_cli({"expand", "--system", "newton-backward", "--input", "x^3-x", "--depth", "4"});
  CHECK(r.out == "0 0 -6 6\n");

  r = run_cli({"convergent", "--system", "decimal", "--input", "1/3", "--order", "3"});
  CHECK(r.out == "333/1000\n");
  r = run_cli({"convergent", "--system", "decimal", "--input", "1/3", "--order", "3", "--approx", "5"});
  CHECK(r.out == "333/1000 ~ 0.333\n");

  r = run_cli({"order", "--system", "decimal", "--input", "1/8", "--max", "10"});
  CHECK(r.out == "3\n");
  r = run_cli({"order", "--system", "decimal", "--input", "1/3", "--max", "10"});
  CHECK(r.out == "none up to 10\n");

  r = run_cli({"systems", "list"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\nengel  scalar") != std::string::npos);
}

TEST_CASE("cli exit codes and error lines") {
  auto r = run_cli({"expand", "--system", "cf", "--input", "3/(", "--depth", "3"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err == "error[parse-error]: unexpected end of input at position 3\n");

  r = run_cli({"expand", "--system", "decimal", "--input", "pi", "--depth", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[domain-error]: ", 0) == 0);

  r = run_cli({"expand", "--system", "nonesuch", "--input", "1/2", "--depth", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[usage]: unknown system", 0) == 0);

  r = run_cli({"expand", "--system", "cf", "--input", "1/2"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[usage]: ", 0) == 0);

  r = run_cli({"expand", "--system", "decimal-scaled", "--input", "sqrt(2)", "--depth", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[unsupported-in-context]: ", 0) == 0);

  r = run_cli({"expand", "--system", "egyptian", "--input", "1/sqrt(2)", "--depth", "12", "--bits", "32"});
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error[precision-exhausted]: ", 0) == 0);

  r = run_cli({"convergent", "--system", "cf", "--input", "7/10", "--order", "1", "--emit", "trace"});
  CHECK(r.code == 4);
  CHECK(r.out == "stage 0: -\nstage 1: 0\nverdict: improper at level 0\n");
  CHECK(r.err.rfind("error[improper]: ", 0) == 0);

  r = run_cli({"report", "--system", "cf", "--input", "1/3", "--nmax", "2", "--out", "/nonexistent/dir/r.csv"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[io-error]: ", 0) == 0);

  CHECK(cli::exit_code_for(quadrature_failure("q")) == 3);
  CHECK(cli::exit_code_for(singularity_on_path("s")) == 3);
  CHECK(cli::exit_code_for(truncation_inconclusive("t")) == 3);
}

TEST_CASE("cli report output equals the library serializers") {
  const auto lib = make_convergence_report(continued_fraction_system<>{}, make_rational(7, 10), 5, abs_metric{}, "7/10");
  std::ostringstream csv;
  write_csv(csv, lib);
  auto r = run_cli({"report", "--system", "cf", "--input", "7/10", "--nmax", "5", "--metric", "abs"});
  CHECK(r.code == 0);
  CHECK(r.out == csv.str());

  const std::string path = temp_path("report.json");
  r = run_cli({"report", "--system", "cf", "--input", "7/10", "--nmax", "5", "--out", path, "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(read_json(in) == lib);
  std::filesystem::remove(path);

  const auto series = make_convergence_report(taylor_system(0, 8),
                                              std::get<power_series>(parse_expression("exp", series_opts(8))), 4,
                                              series_head_metric{}, "exp");
  std::ostringstream scsv;
  write_csv(scsv, series);
  r = run_cli({"report", "--system", "taylor", "--input", "exp", "--series-order", "8", "--nmax", "4", "--metric",
               "series-head"});
  CHECK(r.out == scsv.str());

  r = run_cli({"report", "--system", "newton-forward", "--input", "x^2", "--nmax", "2", "--metric", "abs"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[unsupported-in-context]: ", 0) == 0);
}

TEST_CASE("cli output is deterministic") {
  const std::vector<std::vector<std::string>> invocations = {
      {"report", "--system", "engel", "--input", "sqrt(2)-1", "--nmax", "6", "--format", "json"},
      {"as", "run", "--transform", "k", "--alpha", "-1", "--input", "tan x", "--depth", "5", "--series-order", "16"},
      {"morphism", "verify", "--spec", "cf-shift", "--samples", "10", "--depth", "5", "--seed", "7"},
  };
  for (const auto& args : invocations) {
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}

TEST_CASE("cli config file, flags win") {
  const std::string path = temp_path("config.json");
  {
    std::ofstream f(path);
    f << R"({"system": "cf", "input": "7/10", "depth": 4})";
  }
  auto r = run_cli({"expand", "--config", path});
  CHECK(r.code == 0);
  CHECK(r.out == "1 2 3 inf\n");
  r = run_cli({"expand", "--config", path, "--depth", "2"});
  CHECK(r.out == "1 2\n");
  r = run_cli({"expand", "--input", "1/3", "--config=" + path});
  CHECK(r.out == "3 inf inf inf\n");
  std::filesystem::remove(path);

  r = run_cli({"expand", "--config", temp_path("missing.json")});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[io-error]: ", 0) == 0);
}

TEST_CASE("cli morphism verification and path evaluation") {
  for (const auto& spec : cli::morphism_specs()) {
    const auto r = run_cli({"morphism", "verify", "--spec", spec, "--samples", "20", "--depth", "6", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["passed"] == true);
    CHECK(j["samples"] == 20);
  }

  // y^[2] = 1 + x/2 + 3x^2/8 + 3x^3/32 for 1/sqrt(1-x).
  auto r = run_cli({"as", "eval", "--alpha", "1/2", "--input", "1/sqrt(1-x)", "--path", "0,1/4,1/2", "--order", "2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string point, value;
  const double xs[] = {0, 0.25, 0.5};
  for (double x : xs) {
    lines >> point >> value;
    const double exact = 1 + x / 2 + 3 * x * x / 8 + 3 * x * x * x / 32;
    CHECK(std::stod(value) == Catch::Approx(exact).epsilon(1e-12));
  }

  r = run_cli({"as", "grid", "--alpha", "1/2", "--input", "1/sqrt(1-x)", "--re", "0:0.5:3", "--order", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("point,value,error,status\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  r = run_cli({"as", "report", "--alpha", "1/2", "--input", "1/sqrt(1-x)", "--nmax", "3", "--metric", "path-sup",
               "--points", "1/4;1/2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,proper,distance,coeffs\n", 0) == 0);
}
