#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "exp_poly_coeffs.hpp"
#include "kdebw/elementary.hpp"
#include "kdebw/remez.hpp"

using namespace kdebw;

namespace {

constexpr long double kB30 = 0x1p-30L;
constexpr long double kB28 = 0x1p-28L;
constexpr long double kUlpL = 0x1p-32L;

// The exp_cordic bound: relative 2^-30, floored at 2^-30 absolute.
long double exp_unit(long double ex) { return std::max(kB30, ex * kB30); }

long double err(FixedQ got, long double want) { return std::fabs(decode_long(got) - want); }

}  // namespace

TEST_CASE("exp_cordic examples") {
  CHECK(std::llabs(exp_cordic(kZero).raw() - kOne.raw()) <= 1);
  CHECK(err(exp_cordic(kOne), std::exp(1.0L)) <= std::exp(1.0L) * kB30);
  CHECK(exp_cordic(encode(-40.0)) == kZero);
  CHECK(exp_cordic(encode(-21.5)) == kZero);
  CHECK_THROWS_AS((void)exp_cordic(encode(21.5)), RangeError);
  CHECK_NOTHROW((void)exp_cordic(encode(21.0)));
}

TEST_CASE("exp_cordic error bound on random arguments") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(-21.0, 21.0);
  for (int i = 0; i < 100000; ++i) {
    const FixedQ x = encode(dist(rng));
    const long double want = std::exp(decode_long(x));
    REQUIRE(err(exp_cordic(x), want) <= std::max(kB30, want * kB30));
  }
}

TEST_CASE("ln_cordic examples and domain") {
  CHECK(ln_cordic(kOne) == kZero);
  CHECK(err(ln_cordic(encode(2.718281828)), std::log(2.718281828L)) <= 2 * kB30);
  CHECK(std::fabs(decode_long(ln_cordic(encode(2.718281828))) - 1.0L) <= 2 * kB30);
  CHECK(err(ln_cordic(encode(0.5)), -std::log(2.0L)) <= kB30);
  CHECK_THROWS_AS((void)ln_cordic(kZero), DomainError);
  CHECK_THROWS_AS((void)ln_cordic(encode(-1.0)), DomainError);
}

TEST_CASE("ln_cordic error bound over the positive range") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> log2x(-32.0, 30.9);
  for (int i = 0; i < 100000; ++i) {
    const FixedQ x = encode(std::exp2(log2x(rng)));
    if (x.raw() <= 0) continue;
    REQUIRE(err(ln_cordic(x), std::log(decode_long(x))) <= kB30);
  }
}

TEST_CASE("pow and sqrt examples") {
  std::mt19937_64 rng(107);
  // exp's relative error scales with the result, so the 4-ulp identity holds up to x ~ 2;
  // above that the relative bound applies.
  std::uniform_real_distribution<double> dist(0.01, 2.0);
  std::uniform_real_distribution<double> big(2.0, 1000.0);
  for (int i = 0; i < 1000; ++i) {
    const FixedQ x = encode(dist(rng));
    REQUIRE(std::llabs(pow(x, kOne).raw() - x.raw()) <= 4);
    const FixedQ y = encode(big(rng));
    REQUIRE(err(pow(y, kOne), decode_long(y)) <= decode_long(y) * kB28);
  }
  CHECK(err(pow(encode(4.0), encode(0.5)), 2.0L) <= 2.0L * kB28);
  const FixedQ x = encode(0.0646499);
  const long double want = std::exp(std::log(decode_long(x)) / 9.0L);
  CHECK(err(pow(x, div(kOne, FixedQ::from_int(9))), want) <= want * kB28);
  CHECK(std::fabs(decode_long(pow(x, div(kOne, FixedQ::from_int(9)))) - 0.7376L) < 1e-4L);

  CHECK(sqrt(kOne) == kOne);
  CHECK(sqrt(kZero) == kZero);
  CHECK(err(sqrt(encode(0.25)), 0.5L) <= kB28);
  CHECK(err(sqrt(encode(2.0)), std::sqrt(2.0L)) <= std::sqrt(2.0L) * kB28);
  CHECK_THROWS_AS((void)sqrt(encode(-1.0)), DomainError);
  CHECK_THROWS_AS((void)pow(kZero, kOne), DomainError);
}

TEST_CASE("pow relative error on random arguments") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> log2x(-12.0, 12.0);
  std::uniform_real_distribution<double> ydist(-1.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const FixedQ x = encode(std::exp2(log2x(rng)));
    const FixedQ y = encode(ydist(rng));
    const long double want = std::pow(decode_long(x), decode_long(y));
    // results below ~2^-5 hit the grid spacing before the relative bound
    REQUIRE(err(pow(x, y), want) <= want * kB28 + kUlpL);
  }
}

TEST_CASE("exp_remez examples and agreement with exp_cordic") {
  CHECK(std::llabs(exp_remez(kZero).raw() - kOne.raw()) <= 1);
  CHECK(err(exp_remez(encode(-0.5)), std::exp(-0.5L)) <= kB30);
  CHECK(exp_remez(encode(-40.0)) == kZero);

  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> dist(-21.0, 0.0);
  for (int i = 0; i < 100000; ++i) {
    const FixedQ x = encode(dist(rng));
    REQUIRE(err(exp_remez(x), std::exp(decode_long(x))) <= kB30);
    REQUIRE(std::fabs(decode_long(exp_remez(x)) - decode_long(exp_cordic(x))) <= 0x1p-29L);
  }
}

TEST_CASE("exp_remez is monotone") {
  FixedQ prev = kZero;
  for (int i = 0; i <= 10000; ++i) {
    const FixedQ x = encode(-21.0 + 21.0 * i / 10000.0);
    const FixedQ y = exp_remez(x);
    REQUIRE(y >= prev);
    prev = y;
  }
}

TEST_CASE("exp turns sums into products") {
  std::mt19937_64 rng(127);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const FixedQ a = encode(dist(rng));
    const FixedQ b = encode(dist(rng));
    const long double ea = std::exp(decode_long(a));
    const long double eb = std::exp(decode_long(b));
    const long double lhs = decode_long(exp_cordic(add(a, b)));
    const long double rhs = decode_long(exp_cordic(a)) * decode_long(exp_cordic(b));
    // three unit errors, each carried through the product: a tiny factor's absolute floor
    // gets multiplied by the other factor
    REQUIRE(std::fabs(lhs - rhs) <= exp_unit(ea * eb) + ea * exp_unit(eb) + eb * exp_unit(ea));
  }
}

TEST_CASE("ln inverts exp") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const FixedQ x = encode(dist(rng));
    // half an ulp of rounding on e^x turns into 2^-33 / e^x after the log
    const long double floor = 0x1p-33L / std::exp(decode_long(x));
    REQUIRE(std::fabs(decode_long(ln_cordic(exp_cordic(x))) - decode_long(x)) <= kB28 + floor);
  }
}

TEST_CASE("ninth root raised back to the ninth power") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> log10x(-4.0, 0.0);
  const FixedQ ninth = div(kOne, FixedQ::from_int(9));
  for (int i = 0; i < 10000; ++i) {
    const FixedQ x = encode(std::pow(10.0, log10x(rng)));
    const FixedQ r = pow(x, ninth);
    FixedQ back = r;
    for (int k = 1; k < 9; ++k) back = mul(back, r);
    // the last truncating mul costs up to one ulp, which is 2^-18.7 relative at x = 1e-4
    REQUIRE(std::fabs(decode_long(back) - decode_long(x)) <= decode_long(x) * 0x1p-20L + 2 * kUlpL);
  }
}

TEST_CASE("embedded polynomial matches a fresh generator run") {
  const long double half_ln2 = std::log(2.0L) / 2;
  const PolyApprox fresh = remez_minimax(TargetFunction::exp, -half_ln2, half_ln2, kExpPolyDegree);
  CHECK(fresh.certified_max_abs_error <= 0x1p-34L);
  CHECK(detail::exp_poly_certified_error() == doctest::Approx(static_cast<double>(fresh.certified_max_abs_error)));
  const std::int64_t* embedded = detail::exp_poly_q62();
  for (int i = 0; i <= kExpPolyDegree; ++i) {
    REQUIRE(fresh.coefficients_q62[i].has_value());
    CHECK(*fresh.coefficients_q62[i] == embedded[i]);
  }
}

TEST_CASE("scaled exponential keeps precision for small results") {
  std::mt19937_64 rng(139);
  std::uniform_real_distribution<double> dist(-40.0, 0.0);
  std::uniform_real_distribution<double> amp(-2.0e4, 2.0e4);
  for (ExpImpl impl : {ExpImpl::cordic, ExpImpl::remez}) {
    for (int i = 0; i < 20000; ++i) {
      const FixedQ x = encode(dist(rng));
      const FixedQ a = encode(amp(rng));
      const long double want = decode_long(a) * std::exp(decode_long(x));
      // rounding once: half an ulp plus the exponential's relative error on the product
      REQUIRE(std::fabs(decode_long(mul_exp(a, exp_scaled_with(impl, x))) - want) <=
              kUlpL / 2 + std::fabs(want) * 0x1p-33L);
    }
    CHECK(mul_exp(kOne, exp_scaled_with(impl, encode(-45.0))) == kZero);
    CHECK(mul_exp(kOne, exp_scaled_with(impl, kZero)) == kOne);
  }
}
