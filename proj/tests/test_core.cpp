#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "expsys/core/system.hpp"
#include "expsys/real/systems.hpp"
#include "expsys/series/systems.hpp"

using namespace expsys;

namespace {

std::vector<integer> long_division_digits(rational y, std::size_t depth) {
  // Digits of p/q by schoolbook long division on integers.
  integer p = y.get_num();
  const integer q = y.get_den();
  std::vector<integer> digits;
  for (std::size_t i = 0; i < depth; ++i) {
    p *= 10;
    digits.push_back(p / q);
    p %= q;
  }
  return digits;
}

std::vector<extended_integer> euclid_cf(integer p, integer q, std::size_t depth) {
  // 1/(c0 + 1/(c1 + ...)) for p/q in [0,1): Euclid on (q, p).
  std::vector<extended_integer> out;
  while (out.size() < depth) {
    if (p == 0) {
      out.push_back(extended_integer::positive_infinity());
      continue;
    }
    out.emplace_back(integer(q / p));
    integer r = q % p;
    q = p;
    p = r;
  }
  return out;
}

rational random_unit_rational(std::mt19937_64& rng, long max_den = 10000) {
  std::uniform_int_distribution<long> den(1, max_den);
  const long q = den(rng);
  std::uniform_int_distribution<long> num(0, q - 1);
  return make_rational(num(rng), q);
}

const extended_integer inf = extended_integer::positive_infinity();

}  // namespace

TEST_CASE("coefficient code of 1/8 in the decimal system") {
  base_system<> dec;
  CHECK(coefficient_code_of(dec, make_rational(1, 8), 4).values == std::vector<integer>{1, 2, 5, 0});
  CHECK(coefficient_code_of(dec, make_rational(1, 8), 4).system_id == "decimal");
}

TEST_CASE("continued fraction code of 7/10") {
  continued_fraction_system<> cf;
  const auto code = coefficient_code_of(cf, make_rational(7, 10), 4);
  CHECK(code.values == std::vector<extended_integer>{1, 2, 3, inf});
  CHECK(code.values == euclid_cf(7, 10, 4));
}

TEST_CASE("code of the neutral element is constant") {
  continued_fraction_system<> cf;
  CHECK(coefficient_code_of(cf, rational(0), 3).values == std::vector<extended_integer>{inf, inf, inf});
  base_system<> dec;
  CHECK(coefficient_code_of(dec, rational(0), 3).values == std::vector<integer>{0, 0, 0});
}

TEST_CASE("trajectories") {
  base_system<> dec;
  CHECK(trajectory(dec, make_rational(1, 8), 4) ==
        std::vector<rational>{make_rational(1, 8), make_rational(1, 4), make_rational(1, 2), 0, 0});
  continued_fraction_system<> cf;
  CHECK(trajectory(cf, make_rational(7, 10), 3) ==
        std::vector<rational>{make_rational(7, 10), make_rational(3, 7), make_rational(1, 3), 0});
  CHECK(trajectory(cf, rational(0), 2) == std::vector<rational>{0, 0, 0});
}

TEST_CASE("decimal convergent of [1,2,5]") {
  base_system<> dec;
  const std::vector<integer> code{1, 2, 5};
  const auto trace = convergent(dec, std::span<const integer>(code), 3);
  REQUIRE(trace.is_proper());
  CHECK(trace.value() == make_rational(1, 8));
  CHECK(trace.stages.size() == 4);
  CHECK(*trace.stages[3] == 0);
  CHECK(*trace.stages[2] == make_rational(1, 2));
}

TEST_CASE("order zero convergent is the neutral element") {
  continued_fraction_system<> cf;
  const std::vector<extended_integer> code{};
  const auto trace = convergent(cf, std::span<const extended_integer>(code), 0);
  REQUIRE(trace.is_proper());
  CHECK(trace.value() == 0);
}

TEST_CASE("convergent needs enough coefficients") {
  base_system<> dec;
  const std::vector<integer> code{1};
  CHECK_THROWS_AS(convergent(dec, std::span<const integer>(code), 2), domain_error);
}

TEST_CASE("improper convergent reports the first failing level from the top") {
  continued_fraction_system<> cf;
  // (1, 0) is outside F(S): 1/(1+0) = 1 is not in [0,1).
  const std::vector<extended_integer> code{3, 1};
  const auto trace = convergent(cf, std::span<const extended_integer>(code), 2);
  CHECK_FALSE(trace.is_proper());
  CHECK(trace.verdict.failing_level() == 1);
  CHECK_FALSE(trace.stages[0].has_value());
  CHECK_THROWS_AS(trace.value(), domain_error);
  const auto code710 = coefficient_code_of(cf, make_rational(7, 10), 1);
  CHECK(convergent(cf, code710, 1).verdict == properness::improper_at(0));
}

TEST_CASE("order classification") {
  continued_fraction_system<> cf;
  CHECK(order(cf, make_rational(7, 10), 10) == order_result::finite(3));
  CHECK(order(cf, rational(0), 10) == order_result::finite(0));
  newton_forward_system nf;
  CHECK(order(nf, polynomial::monomial(2), 10) == order_result::finite(3));
  base_system<> dec;
  const auto r = order(dec, make_rational(1, 3), 12);
  CHECK_FALSE(r.is_finite());
  CHECK(r.value() == 12);
}

TEST_CASE("properness profile of a bijective system is all proper") {
  base_system<> dec;
  for (const auto& e : properness_profile(dec, make_rational(22, 71), 8)) CHECK(e.verdict.is_proper());
  const auto single = properness_profile(dec, make_rational(1, 3), 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].verdict.is_proper());
}

TEST_CASE("roundtrip checks") {
  base_system<> dec;
  CHECK(roundtrip_check(dec, make_rational(355, 1130), 10));
  CHECK(roundtrip_check(dec, rational(0), 5));
  engel_system<> engel;
  CHECK(roundtrip_check(engel, make_rational(3, 8), 3));
}

TEST_CASE("domain errors at level 0") {
  base_system<> dec;
  CHECK_THROWS_AS(coefficient_code_of(dec, rational(1), 2), domain_error);
  CHECK_THROWS_AS(trajectory(dec, rational(-1, 2), 2), domain_error);
}

TEST_CASE("framework properties on random rationals") {
  std::mt19937_64 rng(7);
  base_system<> dec;
  continued_fraction_system<> cf;
  egyptian_system<> eg;
  engel_system<> en;
  for (int trial = 0; trial < 100; ++trial) {
    const rational y = random_unit_rational(rng);
    CHECK(roundtrip_check(dec, y, 12));
    CHECK(roundtrip_check(cf, y, 12));
    CHECK(roundtrip_check(eg, y, 6));
    CHECK(roundtrip_check(en, y, 12));
    CHECK(coefficient_code_of(dec, y, 10).values == long_division_digits(y, 10));
    CHECK(coefficient_code_of(cf, y, 12).values == euclid_cf(y.get_num(), y.get_den(), 12));

    // Head coincidence.
    for (std::size_t n = 0; n <= 8; ++n) {
      const auto kept = convergent_keeps_prefix(cf, y, n);
      if (kept) CHECK(*kept);
      CHECK(convergent_keeps_prefix(dec, y, n).value());
    }

    // Finite-order fixpoint.
    const auto ord = order(cf, y, 40);
    REQUIRE(ord.is_finite());
    const auto code = coefficient_code_of(cf, y, ord.value() + 3);
    for (std::size_t m = ord.value(); m <= ord.value() + 3; ++m) {
      const auto trace = convergent(cf, code, m);
      REQUIRE(trace.is_proper());
      CHECK(trace.value() == y);
    }
  }
}

TEST_CASE("equal-prefix substitution") {
  std::mt19937_64 rng(11);
  base_system<> dec;
  for (int trial = 0; trial < 50; ++trial) {
    const rational y = random_unit_rational(rng);
    // y' shares the first 4 digits: perturb below 10^-4.
    const auto digits = coefficient_code_of(dec, y, 4);
    const auto head = convergent(dec, digits, 4).value();
    const rational y2 = head + random_unit_rational(rng) / 10000;
    REQUIRE(coefficient_code_of(dec, y2, 4).values == digits.values);
    const auto t1 = convergent(dec, coefficient_code_of(dec, y, 4), 4);
    const auto t2 = convergent(dec, coefficient_code_of(dec, y2, 4), 4);
    CHECK(t1.is_proper());
    CHECK(t2.is_proper());
    CHECK(t1.value() == t2.value());
  }
}

TEST_CASE("convergent is a pure function of the code prefix") {
  continued_fraction_system<> cf;
  const auto code = coefficient_code_of(cf, make_rational(113, 355), 8);
  const auto a = convergent(cf, code, 5);
  const auto b = convergent(cf, code, 5);
  CHECK(a.value() == b.value());
  CHECK(a.stages == b.stages);
}

TEST_CASE("function_system wraps callables") {
  using fs = function_system<rational, integer>;
  fs halves(fs::maps{"halves",
                     [](std::size_t) { return rational(0); },
                     [](std::size_t, const rational& y) { return floor(2 * y); },
                     [](std::size_t, const rational& y) { return rational(2 * y - floor(2 * y)); },
                     [](std::size_t, const integer& c, const rational& y) -> std::optional<rational> {
                       if (c < 0 || c > 1) return std::nullopt;
                       return (c + y) / 2;
                     },
                     {},
                     {}});
  static_assert(expansion_system<fs>);
  CHECK(coefficient_code_of(halves, make_rational(3, 8), 4).values == std::vector<integer>{0, 1, 1, 0});
  CHECK(order(halves, make_rational(3, 8), 10) == order_result::finite(3));
  CHECK(roundtrip_check(halves, make_rational(5, 7), 10));
}
