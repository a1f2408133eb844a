#pragma once

// PLUGIN bandwidth selection over Q32.32 arithmetic.
//
// The pipeline always standardizes first (z-score), which pins the normal-scale estimate
// of Psi_8 to a constant and keeps every intermediate inside the Q32.32 range. The final
// bandwidth is rescaled by the sample standard deviation of the original data.

#include <chrono>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "kdebw/elementary.hpp"
#include "kdebw/fixedq.hpp"

namespace kdebw {

/// An ordered sample of at least two finite observations.
class Dataset {
 public:
  /// EmptyInputError if fewer than two values, DomainError on NaN/inf.
  explicit Dataset(std::vector<double> values);

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

struct StandardizedDataset {
  std::vector<FixedQ> z;
  FixedQ mu;
  FixedQ sigma;
};

/// Gaussian-kernel constants, each the nearest Q32.32 word to its closed form.
struct KernelConstants {
  FixedQ k6_at_0;      // -15 / sqrt(2 pi)
  FixedQ k4_at_0;      // 3 / sqrt(2 pi)
  FixedQ mu2;          // 1
  FixedQ r_k;          // 1 / (2 sqrt(pi))
  FixedQ psi8_ns_std;  // 105 / (32 sqrt(pi)), normal-scale Psi_8 at sigma = 1
  FixedQ inv_sqrt_2pi;
};

[[nodiscard]] const KernelConstants& kernel_constants() noexcept;

enum class Strategy { literal, minimal, fast };

[[nodiscard]] std::string_view to_string(Strategy s) noexcept;
/// DomainError on an unknown name.
[[nodiscard]] Strategy parse_strategy(std::string_view name);

inline constexpr Strategy kAllStrategies[] = {Strategy::literal, Strategy::minimal, Strategy::fast};

/// Exponential used inside the kernel derivatives: the fast strategy swaps in the
/// polynomial exponential.
[[nodiscard]] constexpr ExpImpl exp_impl_for(Strategy s) noexcept {
  return s == Strategy::fast ? ExpImpl::remez : ExpImpl::cordic;
}

struct PluginConfig {
  Strategy strategy = Strategy::fast;
  /// Worker threads for the pair sums; results are bit-identical for any count.
  unsigned threads = 1;
  OverflowPolicy overflow = OverflowPolicy::checked;
};

struct BandwidthResult {
  FixedQ v_hat;
  FixedQ sigma_hat;
  FixedQ psi8;
  FixedQ g1;
  FixedQ psi6;
  FixedQ g2;
  FixedQ psi4;
  FixedQ h_std;
  FixedQ h_final;
  Strategy strategy = Strategy::fast;
  std::chrono::nanoseconds elapsed{0};
};

struct VarianceStd {
  FixedQ variance;
  FixedQ sigma;
  FixedQ mean;
};

/// Unbiased variance (1/(n-1)) sum X^2 - (1/(n(n-1))) (sum X)^2 with 128-bit sums, and its
/// square root. DegenerateDataError if the variance is not positive.
[[nodiscard]] VarianceStd variance_std(const Dataset& x);

/// z_i = (X_i - mu) * reciprocal(sigma).
[[nodiscard]] StandardizedDataset standardize(const Dataset& x);

/// Pilot bandwidth for the f'''' functional: (-2 K6(0) / (mu2 Psi8_NS n))^(1/9).
[[nodiscard]] FixedQ g1_bandwidth(std::size_t n);

/// Pilot bandwidth for the f'' functional: (-2 K4(0) / (mu2 Psi6 n))^(1/7).
/// DomainError unless psi6 < 0 (the ratio must be positive).
[[nodiscard]] FixedQ g2_bandwidth(FixedQ psi6, std::size_t n);

/// Standardized-scale bandwidth (R(K) / (mu2^2 Psi4 n))^(1/5). DomainError unless psi4 > 0.
[[nodiscard]] FixedQ h_standardized(FixedQ psi4, std::size_t n);

/// Sixth derivative of the Gaussian kernel, polynomial in x^2 evaluated by Horner.
/// Returns 0 once e^(-x^2/2) underflows; OverflowError if x^2 leaves the range.
[[nodiscard]] FixedQ k6(FixedQ x, ExpImpl exp_impl);

/// Fourth derivative of the Gaussian kernel.
[[nodiscard]] FixedQ k4(FixedQ x, ExpImpl exp_impl);

/// Psi_6 estimate with the pair sum halved by symmetry:
/// (1/(n^2 g^7)) [2 sum_{i<j} K6((z_i - z_j)/g) + n K6(0)].
[[nodiscard]] FixedQ psi6(std::span<const FixedQ> z, FixedQ g1, const PluginConfig& config);

/// Psi_4 estimate, same shape with K4 and g^5.
[[nodiscard]] FixedQ psi4(std::span<const FixedQ> z, FixedQ g2, const PluginConfig& config);

/// Psi_6 from the full n x n double sum, no symmetry halving. Reference path for tests.
[[nodiscard]] FixedQ psi6_full_sum(std::span<const FixedQ> z, FixedQ g1, const PluginConfig& config);
[[nodiscard]] FixedQ psi4_full_sum(std::span<const FixedQ> z, FixedQ g2, const PluginConfig& config);

/// Variance, standardization, the three pilot/final bandwidth stages, then h_final = h_std * sigma_hat.
[[nodiscard]] BandwidthResult bandwidth(const Dataset& x, const PluginConfig& config = {});

}  // namespace kdebw
