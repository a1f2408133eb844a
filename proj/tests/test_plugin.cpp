#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "kdebw/oracle.hpp"
#include "kdebw/plugin.hpp"
#include "kdebw/synthetic.hpp"

using namespace kdebw;

namespace {

const long double kSqrt2Pi = std::sqrt(2 * std::numbers::pi_v<long double>);
const std::vector<double> kToy{0, 1, 1.1, 1.5, 1.9, 2.8, 2.9, 3.5};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

PluginConfig with(Strategy s) {
  PluginConfig c;
  c.strategy = s;
  return c;
}

}  // namespace

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset({1.0}), EmptyInputError);
  CHECK_THROWS_AS(Dataset({}), EmptyInputError);
  CHECK_THROWS_AS(Dataset({1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(Dataset({1.0, HUGE_VAL}), DomainError);
  CHECK(Dataset({1.0, 2.0}).size() == 2);
}

TEST_CASE("kernel constants are the nearest words to the closed forms") {
  const auto& kc = kernel_constants();
  const long double sqrt_pi = std::sqrt(std::numbers::pi_v<long double>);
  CHECK(std::fabs(decode_long(kc.k6_at_0) + 15.0L / kSqrt2Pi) <= 0x1p-32L);
  CHECK(std::fabs(decode_long(kc.k4_at_0) - 3.0L / kSqrt2Pi) <= 0x1p-32L);
  CHECK(std::fabs(decode_long(kc.r_k) - 1.0L / (2 * sqrt_pi)) <= 0x1p-32L);
  CHECK(std::fabs(decode_long(kc.psi8_ns_std) - 105.0L / (32 * sqrt_pi)) <= 0x1p-32L);
  CHECK(decode(kc.psi8_ns_std) == doctest::Approx(1.851247).epsilon(1e-6));
  CHECK(kc.mu2 == kOne);
}

TEST_CASE("variance examples") {
  const VarianceStd two = variance_std(Dataset({0.0, 1.0}));
  CHECK(decode(two.variance) == 0.5);
  CHECK(std::fabs(decode_long(two.sigma) - std::sqrt(0.5L)) <= 0x1p-28L);
  CHECK_THROWS_AS((void)variance_std(Dataset({2.5, 2.5, 2.5, 2.5})), DegenerateDataError);

  const Dataset toy(kToy);
  const VarianceStd v = variance_std(toy);
  const double want = oracle::variance(toy.values());
  CHECK(want == doctest::Approx(1.3655357142857).epsilon(1e-12));
  CHECK(std::fabs(decode(v.variance) - want) <= 0x1p-20);
}

TEST_CASE("standardize follows the unbiased variance") {
  // n-1 in the variance makes sigma = sqrt(2) for both two-point sets
  const auto a = standardize(Dataset({-1.0, 1.0}));
  CHECK(a.mu == kZero);
  CHECK(std::fabs(decode(a.sigma) - std::sqrt(2.0)) <= 0x1p-28);
  CHECK(std::fabs(decode(a.z[0]) + 1 / std::sqrt(2.0)) <= 0x1p-28);
  CHECK(a.z[0] == neg(a.z[1]));

  const auto b = standardize(Dataset({0.0, 2.0}));
  CHECK(b.mu == kOne);
  CHECK(std::fabs(decode(b.sigma) - std::sqrt(2.0)) <= 0x1p-28);
  CHECK(b.z == a.z);

  const auto t = standardize(Dataset(kToy));
  long double mean = 0;
  for (FixedQ z : t.z) mean += decode_long(z);
  mean /= t.z.size();
  long double ss = 0;
  for (FixedQ z : t.z) ss += (decode_long(z) - mean) * (decode_long(z) - mean);
  CHECK(std::fabs(mean) <= 0x1p-20L);
  CHECK(std::fabs(std::sqrt(ss / (t.z.size() - 1)) - 1.0L) <= 0x1p-20L);
}

TEST_CASE("g1 bandwidth") {
  const long double want = std::pow(2 * 15 / kSqrt2Pi / (105 / (32 * std::sqrt(std::numbers::pi_v<long double>)) * 100), 1.0L / 9);
  CHECK(std::fabs(decode_long(g1_bandwidth(100)) - want) <= 0x1p-20L);
  CHECK(decode(g1_bandwidth(100)) == doctest::Approx(0.7376).epsilon(1e-4));
  for (std::size_t n : {8u, 100u, 256u}) {
    const long double ratio = decode_long(g1_bandwidth(4 * n)) / decode_long(g1_bandwidth(n));
    CHECK(std::fabs(ratio - std::pow(4.0L, -1.0L / 9)) <= 0x1p-20L);
  }
}

TEST_CASE("g2 bandwidth") {
  // -2 K4(0) / (psi6 * 2) = 1 when psi6 = -3/sqrt(2 pi)
  const FixedQ unit = encode(static_cast<double>(-3.0L / kSqrt2Pi));
  CHECK(std::fabs(decode_long(g2_bandwidth(unit, 2)) - 1.0L) <= 0x1p-26L);
  const FixedQ psi6 = encode(-0.35);
  const FixedQ half = encode(-0.175);
  const long double ratio = decode_long(g2_bandwidth(half, 300)) / decode_long(g2_bandwidth(psi6, 300));
  CHECK(std::fabs(ratio - std::pow(2.0L, 1.0L / 7)) <= 0x1p-20L);
  CHECK_THROWS_AS((void)g2_bandwidth(kZero, 10), DomainError);
  CHECK_THROWS_AS((void)g2_bandwidth(encode(0.3), 10), DomainError);
  CHECK_THROWS_AS((void)h_standardized(encode(-0.1), 10), DomainError);
}

TEST_CASE("kernel derivatives") {
  for (ExpImpl impl : {ExpImpl::cordic, ExpImpl::remez}) {
    CHECK(std::fabs(decode_long(k6(kZero, impl)) + 15.0L / kSqrt2Pi) <= 0x1p-24L);
    CHECK(std::fabs(decode_long(k6(kOne, impl)) - 16.0L / kSqrt2Pi * std::exp(-0.5L)) <= 0x1p-24L);
    CHECK(decode(k6(kOne, impl)) == doctest::Approx(3.8715316).epsilon(1e-8));
    CHECK(std::fabs(decode_long(k4(kZero, impl)) - 3.0L / kSqrt2Pi) <= 0x1p-24L);
    CHECK(std::fabs(decode_long(k4(kOne, impl)) + 2.0L / kSqrt2Pi * std::exp(-0.5L)) <= 0x1p-24L);
    CHECK(decode(k4(kOne, impl)) == doctest::Approx(-0.48394145).epsilon(1e-8));

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(-12.0, 12.0);
    for (int i = 0; i < 20000; ++i) {
      const FixedQ x = encode(dist(rng));
      REQUIRE(k6(x, impl) == k6(neg(x), impl));
      REQUIRE(k4(x, impl) == k4(neg(x), impl));
      REQUIRE(std::fabs(decode(k6(x, impl)) - oracle::k6(decode(x))) <= 0x1p-24);
      REQUIRE(std::fabs(decode(k4(x, impl)) - oracle::k4(decode(x))) <= 0x1p-24);
    }
    CHECK(k6(encode(100.0), impl) == kZero);
  }
}

TEST_CASE("psi estimates on hand-sized inputs") {
  for (Strategy s : kAllStrategies) {
    CAPTURE(to_string(s));
    const auto cfg = with(s);
    const std::vector<FixedQ> same(5, encode(0.25));
    const double g = 0.8;
    const double k6_0 = oracle::k6(0.0);
    CHECK(rel(decode(psi6(same, encode(g), cfg)), k6_0 / std::pow(g, 7)) <= 0x1p-20);
    CHECK(rel(decode(psi4(same, encode(g), cfg)), oracle::k4(0.0) / std::pow(g, 5)) <= 0x1p-20);

    const std::vector<FixedQ> z{encode(-1.0), encode(1.0)};
    const double want6 = (2 * oracle::k6(1.0) + 2 * oracle::k6(0.0)) / (4 * std::pow(2.0, 7));
    const double want4 = (2 * oracle::k4(1.0) + 2 * oracle::k4(0.0)) / (4 * std::pow(2.0, 5));
    CHECK(rel(decode(psi6(z, encode(2.0), cfg)), want6) <= 0x1p-20);
    CHECK(rel(decode(psi4(z, encode(2.0), cfg)), want4) <= 0x1p-20);
    const std::vector<double> zd{-1.0, 1.0};
    CHECK(oracle::psi6(zd, 2.0, oracle::SumForm::halved) == doctest::Approx(want6).epsilon(1e-15));
  }
}

TEST_CASE("halved sums match the full double sum") {
  const auto x = synthetic::standard_normal(64, 5);
  const auto z = standardize(Dataset(x)).z;
  for (Strategy s : kAllStrategies) {
    CAPTURE(to_string(s));
    const auto cfg = with(s);
    const FixedQ g1 = g1_bandwidth(64);
    CHECK(rel(decode(psi6(z, g1, cfg)), decode(psi6_full_sum(z, g1, cfg))) <= 0x1p-20);
    const FixedQ g2 = encode(0.9);
    CHECK(rel(decode(psi4(z, g2, cfg)), decode(psi4_full_sum(z, g2, cfg))) <= 0x1p-20);
  }
}

TEST_CASE("strategies agree on random data") {
  const auto x = synthetic::standard_normal(256, 17);
  const auto z = standardize(Dataset(x)).z;
  const FixedQ g2 = encode(0.95);
  const double ref = decode(psi4(z, g2, with(Strategy::literal)));
  for (Strategy s : kAllStrategies) CHECK(rel(decode(psi4(z, g2, with(s))), ref) <= 1e-5);
}

TEST_CASE("results are bit identical across thread counts") {
  const Dataset x(synthetic::three_component_mixture(300, 3));
  for (Strategy s : kAllStrategies) {
    PluginConfig one = with(s);
    const BandwidthResult base = bandwidth(x, one);
    for (unsigned t : {2u, 3u, 7u}) {
      PluginConfig many = one;
      many.threads = t;
      const BandwidthResult r = bandwidth(x, many);
      CHECK(r.psi6 == base.psi6);
      CHECK(r.psi4 == base.psi4);
      CHECK(r.h_final == base.h_final);
    }
    CHECK(bandwidth(x, one).h_final == base.h_final);
  }
}

TEST_CASE("wrapping policy gives the same bits when nothing overflows") {
  const Dataset x(synthetic::standard_normal(200, 8));
  PluginConfig wrap;
  wrap.overflow = OverflowPolicy::wrapping;
  CHECK(bandwidth(x, wrap).h_final == bandwidth(x).h_final);
}

TEST_CASE("toy dataset against the oracle") {
  const Dataset toy(kToy);
  const auto ref = oracle::oracle_bandwidth(toy);
  for (Strategy s : kAllStrategies) {
    CAPTURE(to_string(s));
    const BandwidthResult r = bandwidth(toy, with(s));
    CHECK(r.strategy == s);
    CHECK(r.h_final > kZero);
    CHECK(r.g1 > kZero);
    CHECK(r.g2 > kZero);
    CHECK(rel(decode(r.h_final), ref.h_final) <= 4e-5);
    CHECK(std::llabs(r.h_final.raw() - mul(r.h_std, r.sigma_hat).raw()) <= 1);
  }
}

TEST_CASE("random n=128 sample: g2 against the oracle") {
  const Dataset x(synthetic::standard_normal(128, 29));
  const auto ref = oracle::oracle_bandwidth(x);
  const BandwidthResult r = bandwidth(x);
  CHECK(rel(decode(r.g2), ref.g2) <= 4e-5);
}

TEST_CASE("scale equivariance and shift invariance") {
  const auto base = synthetic::standard_normal(256, 31);
  const double h = decode(bandwidth(Dataset(base)).h_final);
  for (double c : {0.5, 3.0, 10.0}) {
    std::vector<double> scaled;
    std::vector<double> shifted;
    for (double v : base) {
      scaled.push_back(c * v);
      shifted.push_back(v + c);
    }
    CHECK(rel(decode(bandwidth(Dataset(scaled)).h_final), c * h) <= 1e-5);
    CHECK(rel(decode(bandwidth(Dataset(shifted)).h_final), h) <= 1e-5);
  }
}

TEST_CASE("degenerate data") {
  CHECK_THROWS_AS((void)bandwidth(Dataset({4.0, 4.0, 4.0})), DegenerateDataError);
  CHECK_THROWS_AS((void)standardize(Dataset({-1.5, -1.5})), DegenerateDataError);
}
