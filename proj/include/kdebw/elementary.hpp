#pragma once

// Fixed-point elementary functions. Internal work is done in Q2.62 on normalized
// arguments and rounded to nearest on the way back to Q32.32.

#include "kdebw/fixedq.hpp"

namespace kdebw {

/// Degree of the embedded minimax polynomial used by exp_remez.
inline constexpr int kExpPolyDegree = 7;

/// exp() returns exactly zero below this argument (e^-21 is ~3 ulp).
inline constexpr double kExpUnderflowArgument = -21.0;

/// Shift-and-add exponential over the ln(1 + 2^-i) table (48 steps) after reduction
/// x = k ln2 + r, r in [0, ln2). RangeError if e^x >= 2^31.
[[nodiscard]] FixedQ exp_cordic(FixedQ x);

/// Multiplicative-normalization logarithm over the same table. DomainError for x <= 0.
[[nodiscard]] FixedQ ln_cordic(FixedQ x);

/// x^y = exp_cordic(y * ln_cordic(x)).
[[nodiscard]] FixedQ pow(FixedQ x, FixedQ y);

/// pow(x, 0.5); sqrt(0) = 0; DomainError for x < 0.
[[nodiscard]] FixedQ sqrt(FixedQ x);

/// Range reduction to t in [-ln2/2, ln2/2], Horner evaluation of the embedded minimax
/// polynomial for e^t, then a shift by k. Intended for x <= 0.
[[nodiscard]] FixedQ exp_remez(FixedQ x);

enum class ExpImpl { cordic, remez };

/// e^x before the final rounding: mantissa_q62 * 2^-62 * 2^exponent. The clamp here sits
/// at x < -44 (zero mantissa), well below the -21 of the rounded functions, since the
/// mantissa keeps full precision regardless of magnitude.
struct ScaledExp {
  std::uint64_t mantissa_q62 = 0;
  int exponent = 0;
};

[[nodiscard]] ScaledExp exp_cordic_scaled(FixedQ x);
[[nodiscard]] ScaledExp exp_remez_scaled(FixedQ x);

[[nodiscard]] inline ScaledExp exp_scaled_with(ExpImpl impl, FixedQ x) {
  return impl == ExpImpl::remez ? exp_remez_scaled(x) : exp_cordic_scaled(x);
}

/// a * e^x rounded once to Q32.32. Small exponentials keep their full mantissa, which
/// matters when `a` is large (kernel polynomials reach ~10^4 before the Gaussian damps them).
[[nodiscard]] FixedQ mul_exp(FixedQ a, ScaledExp e);

[[nodiscard]] inline FixedQ exp_with(ExpImpl impl, FixedQ x) {
  return impl == ExpImpl::remez ? exp_remez(x) : exp_cordic(x);
}

namespace detail {
/// Certified max abs error of the embedded polynomial (from the generator run).
[[nodiscard]] long double exp_poly_certified_error() noexcept;
/// Embedded coefficients as signed Q2.62 words, ascending powers.
[[nodiscard]] const std::int64_t* exp_poly_q62() noexcept;
}  // namespace detail

}  // namespace kdebw
