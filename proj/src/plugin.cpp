#include "kdebw/plugin.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace kdebw {

namespace {

using KernelFn = FixedQ (*)(FixedQ, ExpImpl);

const FixedQ kHalf = FixedQ::from_raw(FixedQ::kOneRaw / 2);

// Exponents for the 1/9, 1/7 and 1/5 roots, nearest Q32.32 words.
const FixedQ kNinth = encode(1.0 / 9.0);
const FixedQ kSeventh = encode(1.0 / 7.0);
const FixedQ kFifth = encode(1.0 / 5.0);

FixedQ from_count(std::size_t n) { return FixedQ::from_int(static_cast<std::int64_t>(n)); }

// (num / den)^y as exp(y (ln num - ln den)). Forming the quotient first would round it to
// the 2^-32 grid, and for large n it is ~1e-6, which would cost 1e-4 relative before the root.
FixedQ root_of_ratio(FixedQ num, FixedQ den, FixedQ y) {
  return exp_cordic(mul(y, sub(ln_cordic(num), ln_cordic(den))));
}

FixedQ int_pow(FixedQ base, int exponent) {
  FixedQ out = base;
  for (int i = 1; i < exponent; ++i) out = mul(out, base);
  return out;
}

struct PairSumSpec {
  std::span<const FixedQ> z;
  FixedQ g;
  FixedQ rg;  // reciprocal(g), hoisted by the minimal and fast strategies
  KernelFn kernel;
  Strategy strategy;
};

// Sum over rows [row_begin, row_end) of K((z_i - z_j) / g) for j > i, in the loop shape of
// each strategy.
template <OverflowPolicy Policy>
FixedAccumulator upper_pair_sum(const PairSumSpec& s, std::size_t row_begin, std::size_t row_end) {
  using Ops = LoopOps<Policy>;
  const auto z = s.z;
  const std::size_t n = z.size();
  const ExpImpl impl = exp_impl_for(s.strategy);
  FixedAccumulator acc;

  switch (s.strategy) {
    case Strategy::literal:
      for (std::size_t i = row_begin; i < row_end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const FixedQ u = Ops::mul(Ops::add(z[i], Ops::neg(z[j])), reciprocal(s.g));
          acc.add(s.kernel(u, impl));
        }
      }
      break;

    case Strategy::minimal:
      for (std::size_t i = row_begin; i < row_end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          acc.add(s.kernel(Ops::mul(Ops::add(z[i], Ops::neg(z[j])), s.rg), impl));
        }
      }
      break;

    case Strategy::fast:
      for (std::size_t i = row_begin; i < row_end; ++i) {
        FixedAccumulator row;
        for (std::size_t j = i + 1; j < n; j += 2) {
          const FixedQ t1 = s.kernel(Ops::mul(Ops::add(z[i], Ops::neg(z[j])), s.rg), impl);
          FixedQ t2 = kZero;
          if (j + 1 < n) {
            t2 = s.kernel(Ops::mul(Ops::add(z[i], Ops::neg(z[j + 1])), s.rg), impl);
          }
          row.add(t1);
          row.add(t2);
        }
        acc.add(row);
      }
      break;
  }
  return acc;
}

template <OverflowPolicy Policy>
FixedAccumulator full_pair_sum(const PairSumSpec& s) {
  using Ops = LoopOps<Policy>;
  const auto z = s.z;
  const ExpImpl impl = exp_impl_for(s.strategy);
  FixedAccumulator acc;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      const FixedQ rg = s.strategy == Strategy::literal ? reciprocal(s.g) : s.rg;
      acc.add(s.kernel(Ops::mul(Ops::add(z[i], Ops::neg(z[j])), rg), impl));
    }
  }
  return acc;
}

// Row boundaries splitting the upper triangle into `parts` chunks of similar pair counts.
std::vector<std::size_t> triangle_partition(std::size_t n, std::size_t parts) {
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<std::size_t> bounds{0};
  double done = 0;
  for (std::size_t i = 0; i < n && bounds.size() < parts; ++i) {
    done += static_cast<double>(n - 1 - i);
    if (done >= total * static_cast<double>(bounds.size()) / static_cast<double>(parts)) {
      bounds.push_back(i + 1);
    }
  }
  bounds.push_back(n);
  return bounds;
}

template <OverflowPolicy Policy>
FixedAccumulator upper_pair_sum_parallel(const PairSumSpec& s, unsigned threads) {
  const std::size_t n = s.z.size();
  if (threads <= 1 || n < 64) return upper_pair_sum<Policy>(s, 0, n);

  const auto bounds = triangle_partition(n, threads);
  std::vector<FixedAccumulator> partial(bounds.size() - 1);
  {
    std::vector<std::jthread> workers;
    for (std::size_t c = 0; c + 1 < bounds.size(); ++c) {
      workers.emplace_back([&, c] { partial[c] = upper_pair_sum<Policy>(s, bounds[c], bounds[c + 1]); });
    }
  }
  FixedAccumulator acc;
  for (const auto& p : partial) acc.add(p);
  return acc;
}

// total / (n^2 g^power), realized as count divisions around the g^power scaling.
FixedQ normalize(const FixedAccumulator& total, std::size_t n, const PairSumSpec& s, int power) {
  const FixedQ per_point = total.divided_by(n);
  const FixedQ scaled = s.strategy == Strategy::literal ? div(per_point, int_pow(s.g, power))
                                                        : mul(per_point, int_pow(s.rg, power));
  FixedAccumulator acc;
  acc.add(scaled);
  return acc.divided_by(n);
}

PairSumSpec make_spec(std::span<const FixedQ> z, FixedQ g, KernelFn kernel, Strategy strategy) {
  if (z.empty()) throw EmptyInputError("psi estimate needs at least one point");
  if (g.raw() <= 0) throw DomainError("pilot bandwidth must be positive");
  return PairSumSpec{z, g, reciprocal(g), kernel, strategy};
}

FixedQ psi_halved(std::span<const FixedQ> z, FixedQ g, const PluginConfig& config, KernelFn kernel,
                  FixedQ k_at_0, int power) {
  const PairSumSpec spec = make_spec(z, g, kernel, config.strategy);
  const FixedAccumulator pairs = config.overflow == OverflowPolicy::checked
                                     ? upper_pair_sum_parallel<OverflowPolicy::checked>(spec, config.threads)
                                     : upper_pair_sum_parallel<OverflowPolicy::wrapping>(spec, config.threads);
  FixedAccumulator total;
  total.add(pairs);
  total.add(pairs);
  total.add_scaled(k_at_0, static_cast<std::int64_t>(z.size()));
  return normalize(total, z.size(), spec, power);
}

FixedQ psi_full(std::span<const FixedQ> z, FixedQ g, const PluginConfig& config, KernelFn kernel,
                int power) {
  const PairSumSpec spec = make_spec(z, g, kernel, config.strategy);
  const FixedAccumulator total = config.overflow == OverflowPolicy::checked
                                     ? full_pair_sum<OverflowPolicy::checked>(spec)
                                     : full_pair_sum<OverflowPolicy::wrapping>(spec);
  return normalize(total, z.size(), spec, power);
}

StandardizedDataset standardize_with(const Dataset& x, const VarianceStd& vs) {
  StandardizedDataset out;
  out.mu = vs.mean;
  out.sigma = vs.sigma;
  const FixedQ inv_sigma = reciprocal(vs.sigma);
  out.z.reserve(x.size());
  for (double v : x.values()) out.z.push_back(mul(sub(encode(v), vs.mean), inv_sigma));
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw EmptyInputError("dataset needs at least 2 values, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("dataset contains a non-finite value");
  }
}

const KernelConstants& kernel_constants() noexcept {
  static const KernelConstants constants = [] {
    const long double sqrt_pi = std::sqrt(std::numbers::pi_v<long double>);
    const long double sqrt_2pi = std::sqrt(2 * std::numbers::pi_v<long double>);
    return KernelConstants{
        .k6_at_0 = encode(static_cast<double>(-15.0L / sqrt_2pi)),
        .k4_at_0 = encode(static_cast<double>(3.0L / sqrt_2pi)),
        .mu2 = kOne,
        .r_k = encode(static_cast<double>(1.0L / (2.0L * sqrt_pi))),
        .psi8_ns_std = encode(static_cast<double>(105.0L / (32.0L * sqrt_pi))),
        .inv_sqrt_2pi = encode(static_cast<double>(1.0L / sqrt_2pi)),
    };
  }();
  return constants;
}

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::literal:
      return "literal";
    case Strategy::minimal:
      return "minimal";
    case Strategy::fast:
      return "fast";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown strategy '" + std::string(name) + "'");
}

VarianceStd variance_std(const Dataset& x) {
  const std::size_t n = x.size();
  FixedAccumulator sum;
  FixedAccumulator sum_sq;
  for (double v : x.values()) {
    const FixedQ q = encode(v);
    sum.add(q);
    sum_sq.add(mul(q, q));
  }
  // (1/(n-1)) sum X^2 - (1/(n(n-1))) (sum X)^2 == (n/(n-1)) (mean(X^2) - mean(X)^2)
  const FixedQ mean = sum.divided_by(n);
  const FixedQ spread = sub(sum_sq.divided_by(n), mul(mean, mean));
  const FixedQ variance = add(spread, div(spread, from_count(n - 1)));
  if (variance.raw() <= 0) throw DegenerateDataError("sample variance is zero");
  return VarianceStd{variance, sqrt(variance), mean};
}

StandardizedDataset standardize(const Dataset& x) { return standardize_with(x, variance_std(x)); }

FixedQ g1_bandwidth(std::size_t n) {
  const auto& kc = kernel_constants();
  const FixedQ numerator = neg(add(kc.k6_at_0, kc.k6_at_0));
  const FixedQ denominator = mul(mul(kc.mu2, kc.psi8_ns_std), from_count(n));
  return root_of_ratio(numerator, denominator, kNinth);
}

FixedQ g2_bandwidth(FixedQ psi6, std::size_t n) {
  if (psi6.raw() >= 0) throw DomainError("psi6 estimate must be negative for the g2 root");
  const auto& kc = kernel_constants();
  // both factors are negative; their ratio is what the root needs
  const FixedQ numerator = add(kc.k4_at_0, kc.k4_at_0);
  const FixedQ denominator = neg(mul(mul(kc.mu2, psi6), from_count(n)));
  return root_of_ratio(numerator, denominator, kSeventh);
}

FixedQ h_standardized(FixedQ psi4, std::size_t n) {
  if (psi4.raw() <= 0) throw DomainError("psi4 estimate must be positive for the h root");
  const auto& kc = kernel_constants();
  const FixedQ denominator = mul(mul(mul(kc.mu2, kc.mu2), psi4), from_count(n));
  return root_of_ratio(kc.r_k, denominator, kFifth);
}

FixedQ k6(FixedQ x, ExpImpl exp_impl) {
  const FixedQ x2 = mul(x, x);
  const ScaledExp e = exp_scaled_with(exp_impl, neg(mul(x2, kHalf)));
  if (e.mantissa_q62 == 0) return kZero;
  // x^6 - 15x^4 + 45x^2 - 15 in x^2
  FixedQ p = sub(x2, FixedQ::from_int(15));
  p = add(mul(p, x2), FixedQ::from_int(45));
  p = sub(mul(p, x2), FixedQ::from_int(15));
  return mul_exp(mul(p, kernel_constants().inv_sqrt_2pi), e);
}

FixedQ k4(FixedQ x, ExpImpl exp_impl) {
  const FixedQ x2 = mul(x, x);
  const ScaledExp e = exp_scaled_with(exp_impl, neg(mul(x2, kHalf)));
  if (e.mantissa_q62 == 0) return kZero;
  // x^4 - 6x^2 + 3 in x^2
  FixedQ p = sub(x2, FixedQ::from_int(6));
  p = add(mul(p, x2), FixedQ::from_int(3));
  return mul_exp(mul(p, kernel_constants().inv_sqrt_2pi), e);
}

FixedQ psi6(std::span<const FixedQ> z, FixedQ g1, const PluginConfig& config) {
  return psi_halved(z, g1, config, &k6, kernel_constants().k6_at_0, 7);
}

FixedQ psi4(std::span<const FixedQ> z, FixedQ g2, const PluginConfig& config) {
  return psi_halved(z, g2, config, &k4, kernel_constants().k4_at_0, 5);
}

FixedQ psi6_full_sum(std::span<const FixedQ> z, FixedQ g1, const PluginConfig& config) {
  return psi_full(z, g1, config, &k6, 7);
}

FixedQ psi4_full_sum(std::span<const FixedQ> z, FixedQ g2, const PluginConfig& config) {
  return psi_full(z, g2, config, &k4, 5);
}

BandwidthResult bandwidth(const Dataset& x, const PluginConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = x.size();

  BandwidthResult r;
  r.strategy = config.strategy;

  const VarianceStd vs = variance_std(x);
  r.v_hat = vs.variance;
  r.sigma_hat = vs.sigma;
  const StandardizedDataset zs = standardize_with(x, vs);

  r.psi8 = kernel_constants().psi8_ns_std;
  r.g1 = g1_bandwidth(n);
  r.psi6 = psi6(zs.z, r.g1, config);
  r.g2 = g2_bandwidth(r.psi6, n);
  r.psi4 = psi4(zs.z, r.g2, config);
  r.h_std = h_standardized(r.psi4, n);
  r.h_final = mul(r.h_std, r.sigma_hat);

  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return r;
}

}  // namespace kdebw
