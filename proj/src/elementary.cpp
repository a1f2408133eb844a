#include "kdebw/elementary.hpp"

#include <array>
#include <bit>
#include <cstdint>

#include "exp_poly_coeffs.hpp"

namespace kdebw {

namespace {

constexpr int kQ = 62;  // working fraction bits
constexpr int kToQ62 = kQ - FixedQ::kFracBits;
constexpr int kCordicSteps = 48;

constexpr std::int64_t kLn2Q62 = 0x2c5c85fdf473de6b;
constexpr std::int64_t kInvLn2Q62 = 0x5c551d94ae0bf85e;  // 1/ln2

// ln(1 + 2^-i), i = 1..48, Q2.62 rounded to nearest.
constexpr std::array<std::uint64_t, kCordicSteps> kLnTable = {
    0x19f323ecbf984bf3ULL, 0x0e47fbe3cd4d10d6ULL, 0x0789c1db8abcb97aULL, 0x03e14618022c54ccULL,
    0x01f829b0e7833005ULL, 0x00fe054587e01f1eULL, 0x007f80a9ac419e24ULL, 0x003fe01545621781ULL,
    0x001ff802a9ab10e6ULL, 0x000ffe0055455888ULL, 0x0007ff800aa9aac4ULL, 0x0003ffe001554556ULL,
    0x0001fff8002aa9abULL, 0x0000fffe00055545ULL, 0x00007fff8000aaaaULL, 0x00003fffe0001555ULL,
    0x00001ffff80002abULL, 0x00000ffffe000055ULL, 0x000007ffff80000bULL, 0x000003ffffe00001ULL,
    0x000001fffff80000ULL, 0x000000fffffe0000ULL, 0x0000007fffff8000ULL, 0x0000003fffffe000ULL,
    0x0000001ffffff800ULL, 0x0000000ffffffe00ULL, 0x00000007ffffff80ULL, 0x00000003ffffffe0ULL,
    0x00000001fffffff8ULL, 0x00000000fffffffeULL, 0x0000000080000000ULL, 0x0000000040000000ULL,
    0x0000000020000000ULL, 0x0000000010000000ULL, 0x0000000008000000ULL, 0x0000000004000000ULL,
    0x0000000002000000ULL, 0x0000000001000000ULL, 0x0000000000800000ULL, 0x0000000000400000ULL,
    0x0000000000200000ULL, 0x0000000000100000ULL, 0x0000000000080000ULL, 0x0000000000040000ULL,
    0x0000000000020000ULL, 0x0000000000010000ULL, 0x0000000000008000ULL, 0x0000000000004000ULL,
};

constexpr FixedQ::raw_type kUnderflowRaw = -21 * FixedQ::kOneRaw;
constexpr FixedQ::raw_type kScaledUnderflowRaw = -44 * FixedQ::kOneRaw;  // keeps 62 - k < 127

// Rounds a non-negative Q2.62 mantissa scaled by 2^k into a Q32.32 word.
FixedQ scale_to_q32(std::uint64_t mantissa_q62, int k) {
  const int shift = kToQ62 - k;
  if (shift < 0) throw RangeError("exp result exceeds Q32.32 range");
  std::uint64_t raw = mantissa_q62;
  if (shift >= 64) {
    raw = 0;
  } else if (shift > 0) {
    raw = static_cast<std::uint64_t>((static_cast<uint128_t>(mantissa_q62) + (uint128_t{1} << (shift - 1))) >> shift);
  }
  if (raw > static_cast<std::uint64_t>(FixedQ::kMaxRaw)) throw RangeError("exp result exceeds Q32.32 range");
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(raw));
}

// Rounds a signed Q.62 value held at 128 bits into a Q32.32 word.
FixedQ round_q62_to_q32(int128_t v) {
  const int128_t rounded = (v + (int128_t{1} << (kToQ62 - 1))) >> kToQ62;
  if (rounded > FixedQ::kMaxRaw || rounded < FixedQ::kMinRaw) throw RangeError("result exceeds Q32.32 range");
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(rounded));
}

// k = x / ln2 rounded by `nearest` (else floored), via multiplication by 1/ln2.
std::int64_t ln2_multiple(FixedQ x, bool nearest) {
  constexpr int kShift = FixedQ::kFracBits + kQ;
  int128_t prod = static_cast<int128_t>(x.raw()) * kInvLn2Q62;
  if (nearest) prod += int128_t{1} << (kShift - 1);
  return static_cast<std::int64_t>(prod >> kShift);
}

}  // namespace

ScaledExp exp_cordic_scaled(FixedQ x) {
  if (x.raw() < kScaledUnderflowRaw) return ScaledExp{};

  const int128_t x62 = static_cast<int128_t>(x.raw()) << kToQ62;
  std::int64_t k = ln2_multiple(x, false);
  int128_t r = x62 - static_cast<int128_t>(k) * kLn2Q62;
  while (r < 0) {
    --k;
    r += kLn2Q62;
  }
  while (r >= kLn2Q62) {
    ++k;
    r -= kLn2Q62;
  }
  if (k > kToQ62) throw RangeError("exp_cordic: result exceeds Q32.32 range");

  // e^r = prod (1 + 2^-i) over the table entries consumed greedily from r.
  auto rem = static_cast<std::uint64_t>(r);
  std::uint64_t y = std::uint64_t{1} << kQ;
  for (int i = 1; i <= kCordicSteps; ++i) {
    const std::uint64_t step = kLnTable[static_cast<std::size_t>(i - 1)];
    if (rem >= step) {
      rem -= step;
      y += y >> i;
    }
  }
  return ScaledExp{y, static_cast<int>(k)};
}

FixedQ exp_cordic(FixedQ x) {
  if (x.raw() < kUnderflowRaw) return kZero;
  const ScaledExp e = exp_cordic_scaled(x);
  return e.mantissa_q62 == 0 ? kZero : scale_to_q32(e.mantissa_q62, e.exponent);
}

FixedQ ln_cordic(FixedQ x) {
  if (x.raw() <= 0) throw DomainError("ln_cordic: argument must be positive");

  // x = m * 2^(msb - 32), m in [1, 2).
  const auto mag = static_cast<std::uint64_t>(x.raw());
  const int msb = std::bit_width(mag) - 1;
  const std::uint64_t m = mag << (kQ - msb);

  std::uint64_t y = std::uint64_t{1} << kQ;
  std::uint64_t acc = 0;
  for (int i = 1; i <= kCordicSteps; ++i) {
    const std::uint64_t next = y + (y >> i);
    if (next <= m) {
      y = next;
      acc += kLnTable[static_cast<std::size_t>(i - 1)];
    }
  }
  const int128_t total = static_cast<int128_t>(msb - FixedQ::kFracBits) * kLn2Q62 + acc;
  return round_q62_to_q32(total);
}

FixedQ pow(FixedQ x, FixedQ y) {
  if (x.raw() <= 0) throw DomainError("pow: base must be positive");
  return exp_cordic(mul(y, ln_cordic(x)));
}

FixedQ sqrt(FixedQ x) {
  if (x.raw() < 0) throw DomainError("sqrt: negative argument");
  if (x.raw() == 0) return kZero;
  return pow(x, FixedQ::from_raw(FixedQ::kOneRaw / 2));
}

ScaledExp exp_remez_scaled(FixedQ x) {
  if (x.raw() < kScaledUnderflowRaw) return ScaledExp{};

  const std::int64_t k = ln2_multiple(x, true);
  if (k > kToQ62) throw RangeError("exp_remez: result exceeds Q32.32 range");
  const int128_t x62 = static_cast<int128_t>(x.raw()) << kToQ62;
  const auto t = static_cast<std::int64_t>(x62 - static_cast<int128_t>(k) * kLn2Q62);

  const auto& c = detail::kExpPolyQ62;
  int128_t acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc = ((acc * t) >> kQ) + c[i];
  }
  return ScaledExp{static_cast<std::uint64_t>(acc), static_cast<int>(k)};
}

FixedQ exp_remez(FixedQ x) {
  if (x.raw() < kUnderflowRaw) return kZero;
  const ScaledExp e = exp_remez_scaled(x);
  return e.mantissa_q62 == 0 ? kZero : scale_to_q32(e.mantissa_q62, e.exponent);
}

FixedQ mul_exp(FixedQ a, ScaledExp e) {
  if (e.mantissa_q62 == 0) return kZero;
  const int shift = kQ - e.exponent;
  if (shift <= 0 || shift >= 127) throw RangeError("mul_exp: exponent out of range");
  const int128_t prod = static_cast<int128_t>(a.raw()) * static_cast<int128_t>(e.mantissa_q62);
  // |a| < 2^63 and the mantissa < 2^63, so the product fits; add half and floor
  const int128_t rounded = (prod + (int128_t{1} << (shift - 1))) >> shift;
  if (rounded > FixedQ::kMaxRaw || rounded < FixedQ::kMinRaw) throw_overflow("mul_exp");
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(rounded));
}

namespace detail {

long double exp_poly_certified_error() noexcept { return kExpPolyCertifiedError; }

const std::int64_t* exp_poly_q62() noexcept { return kExpPolyQ62.data(); }

}  // namespace detail

}  // namespace kdebw
