#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "expsys/morph/morphism.hpp"

using namespace expsys;

namespace {

std::vector<polynomial> random_polys(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
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

std::vector<rational> random_unit_rationals(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> den(2, 5000);
  std::vector<rational> out;
  for (std::size_t s = 0; s < count; ++s) {
    const long d = den(rng);
    out.push_back(make_rational(std::uniform_int_distribution<long>(0, d - 1)(rng), d));
  }
  return out;
}

std::vector<power_series> random_germs(std::size_t count, const rational& constant, std::size_t order,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(1, 3);
  std::uniform_int_distribution<long> den(1, 3);
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<power_series> out;
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<rational> c(order + 1);
    c[0] = constant;
    const std::size_t zeros = coin(rng) == 0 ? 2 : 0;
    for (std::size_t k = zeros + 1; k <= order; ++k) c[k] = make_rational(coin(rng) < 2 ? num(rng) : -num(rng), den(rng));
    out.emplace_back(rational(0), std::move(c));
  }
  return out;
}

rational binom(long n, long k) {
  rational r = 1;
  for (long j = 0; j < k; ++j) r = r * (n - j) / (j + 1);
  return r;
}

/// k-th forward difference at 0 by the binomial sum.
rational forward_at_zero(const polynomial& y, long k) {
  rational s = 0;
  for (long j = 0; j <= k; ++j) s += ((k - j) % 2 == 0 ? 1 : -1) * binom(k, j) * y(j);
  return s;
}

/// k-th backward difference at 0 by the binomial sum.
rational backward_at_zero(const polynomial& y, long k) {
  rational s = 0;
  for (long j = 0; j <= k; ++j) s += (j % 2 == 0 ? 1 : -1) * binom(k, j) * y(-j);
  return s;
}

}  // namespace

TEST_CASE("newton reflection is a homomorphism from forward to backward differences") {
  const newton_forward_system fwd;
  const newton_backward_system bwd;
  const auto refl = newton_reflection_morphism();
  const auto report = verify_homomorphism(refl, fwd, bwd, random_polys(20, 11), 6);
  INFO(report.summary());
  CHECK(report.passed());
  CHECK(report.summary() == "no violation found on 20 samples to depth 6");
  CHECK(report.checks > 0);
}

TEST_CASE("newton reflection sign rule against binomial sums") {
  const newton_forward_system fwd;
  const newton_backward_system bwd;
  const auto refl = newton_reflection_morphism();
  for (const auto& y : random_polys(10, 5)) {
    const auto image = refl.lambda_s(0, y);
    const auto back = coefficient_code_of(bwd, image, 8);
    const auto forward = coefficient_code_of(fwd, y, 8);
    for (long k = 0; k < 8; ++k) {
      CHECK(forward.values[k] == forward_at_zero(y, k));
      CHECK(back.values[k] == backward_at_zero(image, k));
      CHECK(back.values[k] == (k % 2 == 0 ? -1 : 1) * forward_at_zero(y, k));
    }
  }
}

TEST_CASE("newton reflection with identity on coefficients fails hom-P at level 0") {
  auto wrong = newton_reflection_morphism();
  wrong.lambda_c = [](std::size_t, const rational& c) { return c; };
  const auto report = verify_homomorphism(wrong, newton_forward_system{}, newton_backward_system{},
                                          {polynomial(std::vector<rational>{1, 2})}, 6);
  REQUIRE_FALSE(report.passed());
  CHECK(report.violation->equation == "hom-P");
  CHECK(report.violation->level == 0);
  CHECK(report.violation->sample == std::optional<std::size_t>(0));
}

TEST_CASE("level-independent reflection lands on the negated backward difference") {
  morphism_spec<polynomial, rational> flat;
  flat.name = "flat-reflection";
  flat.lambda_s = [](std::size_t, const polynomial& y) { return -y.compose_affine(-1, 0); };
  flat.lambda_c = [](std::size_t, const rational& c) -> rational { return -c; };
  const auto samples = random_polys(20, 3);

  const auto into_backward = verify_homomorphism(flat, newton_forward_system{}, newton_backward_system{}, samples, 6);
  REQUIRE_FALSE(into_backward.passed());
  CHECK(into_backward.violation->equation == "hom-E");

  function_system<polynomial, rational>::maps m;
  m.id = "newton-backward-negated";
  m.neutral = [](std::size_t) { return polynomial(); };
  m.project = [](std::size_t, const polynomial& y) { return y(0); };
  m.expand = [](std::size_t, const polynomial& y) { return -backward_difference(y); };
  m.reconstruct = [](std::size_t, const rational&, const polynomial&) { return std::optional<polynomial>(); };
  const function_system<polynomial, rational> negated(m);
  CHECK(verify_homomorphism(flat, newton_forward_system{}, negated, samples, 6).passed());
}

TEST_CASE("reflection transports the convergent of x^3 - x") {
  const newton_forward_system fwd;
  const newton_backward_system bwd;
  const auto refl = newton_reflection_morphism();
  const polynomial y(std::vector<rational>{0, -1, 0, 1});
  CHECK(coefficient_code_of(fwd, y, 4).values == std::vector<rational>{0, 0, 6, 6});
  const auto image = refl.lambda_s(0, y);
  CHECK(image == y);
  CHECK(coefficient_code_of(bwd, image, 4).values == std::vector<rational>{0, 0, -6, 6});

  const auto translated = translate_convergent(refl, fwd, bwd, image, 4);
  const auto direct = convergent(bwd, coefficient_code_of(bwd, image, 4), 4);
  CHECK(translated.value() == direct.value());
  CHECK(translated.value() == y);
  for (std::size_t n = 0; n <= 4; ++n) {
    const auto t = translate_convergent(refl, fwd, bwd, image, n).value();
    CHECK(t == convergent(bwd, coefficient_code_of(bwd, image, n), n).value());
    CHECK(t == newton_backward_formula(coefficient_code_of(bwd, image, 4).values, n));
  }
}

TEST_CASE("identity, inverse and composition") {
  const newton_forward_system fwd;
  const newton_backward_system bwd;
  const auto samples = random_polys(20, 8);
  CHECK(verify_homomorphism(identity_morphism<polynomial, rational>(), fwd, fwd, samples, 6).passed());

  const auto refl = newton_reflection_morphism();
  const auto inv = inverse_morphism(refl);
  CHECK(inv.name == "inverse(newton-reflection)");
  CHECK(verify_homomorphism(inv, bwd, fwd, samples, 6).passed());

  const auto round = compose(inv, refl);
  CHECK(round.claims_bijective);
  const auto report = verify_homomorphism(round, fwd, fwd, samples, 6);
  CHECK(report.passed());
  for (const auto& y : samples) CHECK(round.lambda_s(3, y) == y);

  morphism_spec<polynomial, rational> lossy{"lossy", refl.lambda_s, refl.lambda_c, false, {}, {}};
  CHECK_THROWS_AS(inverse_morphism(lossy), domain_error);
}

TEST_CASE("inverse claims are checked") {
  auto broken = newton_reflection_morphism();
  broken.inverse_s = [](std::size_t, const polynomial& y) { return y; };
  const auto report = verify_homomorphism(broken, newton_forward_system{}, newton_backward_system{},
                                          {polynomial(std::vector<rational>{0, 0, 1})}, 3);
  REQUIRE_FALSE(report.passed());
  CHECK(report.violation->equation == "inverse-S");
}

TEST_CASE("decimal digits of y and of 10y") {
  const base_system<> dec;
  const scaled_decimal_system scaled;
  const auto samples = random_unit_rationals(20, 21);
  const auto spec = decimal_scaling_morphism();
  CHECK(verify_homomorphism(spec, dec, scaled, samples, 6).passed());

  const auto shifted = shift_isomorphism(dec, decimal_split(), samples, 6);
  CHECK(verify_homomorphism(shifted.spec, dec, shifted.target, samples, 6).passed());
  for (const auto& y : samples) {
    const rational ten_y = 10 * y;
    CHECK(coefficient_code_of(shifted.target, ten_y, 8).values == coefficient_code_of(scaled, ten_y, 8).values);
    CHECK(coefficient_code_of(scaled, ten_y, 8).values == coefficient_code_of(dec, y, 8).values);
    for (std::size_t n = 0; n <= 6; ++n) {
      const rational p = pow(rational(10), static_cast<long>(n));
      const rational truncated = rational(floor(y * p)) / p;
      CHECK(convergent(dec, coefficient_code_of(dec, y, n), n).value() == truncated);
      CHECK(convergent(scaled, coefficient_code_of(scaled, ten_y, n), n).value() == 10 * truncated);
      CHECK(translate_convergent(spec, dec, scaled, ten_y, n).value() == 10 * truncated);
    }
  }
}

TEST_CASE("continued fraction of y and of 1/y") {
  const continued_fraction_system<> cf;
  const cf_over_one_system over;
  auto samples = random_unit_rationals(20, 4);
  samples.push_back(0);
  const auto spec = cf_inversion_morphism();
  const auto report = verify_homomorphism(spec, cf, over, samples, 6);
  INFO(report.summary());
  CHECK(report.passed());

  const auto shifted = shift_isomorphism(cf, cf_split(), samples, 6);
  CHECK(verify_homomorphism(shifted.spec, cf, shifted.target, samples, 6).passed());
  for (const auto& y : samples) {
    const auto image = spec.lambda_s(0, y);
    CHECK(coefficient_code_of(shifted.target, image, 7).values == coefficient_code_of(over, image, 7).values);
    CHECK(coefficient_code_of(over, image, 7).values == coefficient_code_of(cf, y, 7).values);
  }

  const rational y = make_rational(7, 16);
  const auto code = coefficient_code_of(over, extended_rational(make_rational(16, 7)), 4);
  CHECK(code.values == std::vector<extended_integer>{2, 3, 2, extended_integer::positive_infinity()});
  CHECK(convergent(over, code, 2).value() == extended_rational(make_rational(7, 3)));
  CHECK(convergent(cf, coefficient_code_of(cf, y, 2), 2).value() == make_rational(3, 7));
  CHECK(translate_convergent(spec, cf, over, extended_rational(make_rational(16, 7)), 2).value() ==
        extended_rational(make_rational(7, 3)));
}

TEST_CASE("a split whose inverse is wrong is rejected") {
  auto split = decimal_split();
  split.e1_inverse = [](std::size_t, const rational& y) -> rational { return y / 100; };
  CHECK_THROWS_AS(shift_isomorphism(base_system<>{}, split, {make_rational(1, 3)}, 2), domain_error);
  auto split2 = decimal_split();
  split2.e2 = [](std::size_t, const rational& y) -> rational { return y / 10; };
  CHECK_THROWS_AS(shift_isomorphism(base_system<>{}, split2, {make_rational(2, 7)}, 2), domain_error);
}

TEST_CASE("approximation system and its derivative form") {
  const std::vector<as_config> configs = {
      {as_transform::d, as_nonlinearity::power, alpha_schedule::constant(make_rational(1, 2)), 0, 16, {}, 2},
      {as_transform::d, as_nonlinearity::power, alpha_schedule::constant(-1), 0, 16, {}, 2},
      {as_transform::d, as_nonlinearity::power, alpha_schedule::list({2, make_rational(1, 3), 5}), 0, 16, {}, 2},
      {as_transform::d, as_nonlinearity::logexp, alpha_schedule::constant(1), 0, 16, {}, 2},
  };
  for (const auto& cfg : configs) {
    const as_system sys(cfg);
    const as_primed_system primed(sys);
    const auto samples = random_germs(20, sys.level_constant(0), 16, 99);
    const auto spec = as_derivative_morphism(sys);
    const auto report = verify_homomorphism(spec, sys, primed, samples, 6);
    INFO(sys.id() << ": " << report.summary());
    CHECK(report.passed());

    const auto shifted = shift_isomorphism(sys, as_d_split(sys), samples, 6);
    for (const auto& y : samples) {
      const auto dy = y.derivative();
      CHECK(coefficient_code_of(shifted.target, dy, 6).values == coefficient_code_of(primed, dy, 6).values);
      CHECK(coefficient_code_of(primed, dy, 6).values == coefficient_code_of(sys, y, 6).values);
      for (std::size_t n : {1u, 3u, 5u}) {
        const auto transported = convergent_transported(spec, sys, primed, y, n);
        REQUIRE(transported.has_value());
        CHECK(*transported);
      }
    }
  }
  as_config k_config;
  k_config.transform = as_transform::k;
  CHECK_THROWS_AS(as_primed_system(as_system(k_config)), domain_error);
}

TEST_CASE("primed reconstruction inverts primed expansion") {
  const as_system sys({as_transform::d, as_nonlinearity::power, alpha_schedule::constant(make_rational(1, 2)), 0, 16,
                       {}, 2});
  const as_primed_system primed(sys);
  for (const auto& y : random_germs(10, 1, 16, 7)) {
    const auto dy = y.derivative();
    const auto c = primed.project(0, dy);
    const auto back = primed.reconstruct(0, c, primed.expand(0, dy));
    REQUIRE(back.has_value());
    CHECK(back->agrees_through(dy, back->order()));
    CHECK(roundtrip_check(primed, dy, 4));
  }
  CHECK(primed.is_neutral(0, primed.neutral(0)));
  CHECK(primed.reconstruct(0, as_coefficient{}, primed.neutral(1)).has_value());
}
