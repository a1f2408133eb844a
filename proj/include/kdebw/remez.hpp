#pragma once

// Minimax polynomial generation by the Remez exchange algorithm.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kdebw/error.hpp"

namespace kdebw {

enum class TargetFunction { exp };

[[nodiscard]] std::string_view to_string(TargetFunction f) noexcept;
[[nodiscard]] long double evaluate_target(TargetFunction f, long double x);

struct PolyApprox {
  TargetFunction target = TargetFunction::exp;
  int degree = 0;
  long double lo = 0;
  long double hi = 0;
  /// Ascending powers: c0 + c1 t + ... + c_degree t^degree.
  std::vector<long double> coefficients;
  /// Signed Q2.62 words; empty optional when |c| >= 2.
  std::vector<std::optional<std::int64_t>> coefficients_q62;
  /// max |p - f| over a dense sampling of the domain and the final reference set.
  long double certified_max_abs_error = 0;
  /// Number of alternating-sign extrema whose magnitude reaches the certified error (1% slack).
  int equioscillation_points = 0;
  int iterations = 0;
};

struct RemezOptions {
  int max_iterations = 100;
  /// Stop once (max |e| - min |e|) / max |e| over the reference set falls below this.
  long double relative_spread = 0.01L;
  int certification_samples = 100001;
};

/// Runs the exchange iteration from Chebyshev extrema nodes. Throws DomainError for
/// degree < 0 or lo > hi, ConvergenceError when the budget is exhausted.
[[nodiscard]] PolyApprox remez_minimax(TargetFunction target, long double lo, long double hi,
                                       int degree, const RemezOptions& options = {});

/// Horner evaluation of the high-precision coefficients.
[[nodiscard]] long double evaluate(const PolyApprox& poly, long double t) noexcept;

}  // namespace kdebw
