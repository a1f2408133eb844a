#pragma once

// Binary64 reference implementation of the PLUGIN pipeline. This is the ground truth
// that fixed-point results are certified against.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kdebw/plugin.hpp"

namespace kdebw::oracle {

struct OracleResult {
  double mu = 0;
  double v_hat = 0;
  double sigma_hat = 0;
  double psi8 = 0;
  double g1 = 0;
  double psi6 = 0;       // symmetry-halved sum (drives the pipeline)
  double psi6_full = 0;  // full n x n sum at the same g1
  double g2 = 0;
  double psi4 = 0;
  double psi4_full = 0;
  double h_std = 0;
  double h_final = 0;
};

[[nodiscard]] double k6(double x) noexcept;
[[nodiscard]] double k4(double x) noexcept;

enum class SumForm { halved, full };

/// (1/(n^2 g^7)) sum K6((z_i - z_j)/g) in either summation form.
[[nodiscard]] double psi6(std::span<const double> z, double g, SumForm form);
[[nodiscard]] double psi4(std::span<const double> z, double g, SumForm form);

/// Unbiased variance by the one-pass sum formula.
[[nodiscard]] double variance(std::span<const double> x);

/// Full pipeline. DegenerateDataError on zero variance, DomainError if a root argument
/// turns non-positive.
[[nodiscard]] OracleResult oracle_bandwidth(const Dataset& x);

/// |value - ref| / |ref| * 100.
[[nodiscard]] double delta_percent(double value, double ref) noexcept;

struct StepDelta {
  std::string name;
  double fixed = 0;
  double ref = 0;
  double delta_percent = 0;
};

struct ComparisonReport {
  std::size_t n = 0;
  Strategy strategy = Strategy::fast;
  double h_fixed = 0;
  double h_ref = 0;
  double delta_percent = 0;
  std::vector<StepDelta> per_step;
};

/// Runs both pipelines on `x` and reports relative errors per intermediate and for h_final.
[[nodiscard]] ComparisonReport compare(const Dataset& x, const PluginConfig& config);

/// Builds the report from already computed results.
[[nodiscard]] ComparisonReport make_report(std::size_t n, const BandwidthResult& fixed,
                                           const OracleResult& ref);

}  // namespace kdebw::oracle
