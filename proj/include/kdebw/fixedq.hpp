#pragma once

// Signed Q32.32 fixed point: a 64-bit two's-complement word holding value = raw * 2^-32.
// The operator set mirrors a hardware datapath: exact add, truncating mul,
// Newton reciprocal, and division as mul(a, reciprocal(b)). Subtraction is add(a, neg(b)).
//
// The most-negative raw word is never produced by a checked operation, so neg() is total
// on every checked result.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "kdebw/error.hpp"

namespace kdebw {

__extension__ using int128_t = __int128;
__extension__ using uint128_t = unsigned __int128;

class FixedQ {
 public:
  using raw_type = std::int64_t;

  static constexpr int kFracBits = 32;
  static constexpr raw_type kOneRaw = raw_type{1} << kFracBits;
  static constexpr raw_type kMaxRaw = std::numeric_limits<raw_type>::max();
  static constexpr raw_type kMinRaw = -kMaxRaw;  // most-negative word excluded

  constexpr FixedQ() noexcept = default;

  [[nodiscard]] static constexpr FixedQ from_raw(raw_type raw) noexcept { return FixedQ(raw); }

  /// Exact conversion of an integer; RangeError outside [-2^31 + 1, 2^31 - 1].
  [[nodiscard]] static FixedQ from_int(std::int64_t value);

  [[nodiscard]] constexpr raw_type raw() const noexcept { return raw_; }

  friend constexpr bool operator==(FixedQ, FixedQ) noexcept = default;
  friend constexpr auto operator<=>(FixedQ, FixedQ) noexcept = default;

 private:
  constexpr explicit FixedQ(raw_type raw) noexcept : raw_(raw) {}

  raw_type raw_ = 0;
};

inline constexpr FixedQ kZero = FixedQ::from_raw(0);
inline constexpr FixedQ kOne = FixedQ::from_raw(FixedQ::kOneRaw);
inline constexpr FixedQ kUlp = FixedQ::from_raw(1);

/// Round-to-nearest (ties away from zero). RangeError if |v| >= 2^31 or v is not finite.
[[nodiscard]] FixedQ encode(double v);

[[nodiscard]] constexpr double decode(FixedQ q) noexcept {
  return static_cast<double>(q.raw()) * 0x1p-32;
}

[[nodiscard]] constexpr long double decode_long(FixedQ q) noexcept {
  return static_cast<long double>(q.raw()) * 0x1p-32L;
}

[[noreturn]] void throw_overflow(const char* op);

[[nodiscard]] inline FixedQ neg(FixedQ a) {
  if (a.raw() == std::numeric_limits<FixedQ::raw_type>::min()) throw_overflow("neg");
  return FixedQ::from_raw(-a.raw());
}

[[nodiscard]] inline FixedQ add(FixedQ a, FixedQ b) {
  FixedQ::raw_type r = 0;
  if (__builtin_add_overflow(a.raw(), b.raw(), &r) ||
      r == std::numeric_limits<FixedQ::raw_type>::min()) {
    throw_overflow("add");
  }
  return FixedQ::from_raw(r);
}

[[nodiscard]] inline FixedQ sub(FixedQ a, FixedQ b) { return add(a, neg(b)); }

/// Full 128-bit product, arithmetic shift right by 32 (truncation toward -inf), checked narrowing.
[[nodiscard]] inline FixedQ mul(FixedQ a, FixedQ b) {
  const int128_t wide = (static_cast<int128_t>(a.raw()) * b.raw()) >> FixedQ::kFracBits;
  if (wide > FixedQ::kMaxRaw || wide < FixedQ::kMinRaw) throw_overflow("mul");
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(wide));
}

/// Newton reciprocal: normalize to [0.5, 1), linear seed 48/17 - 32/17 b, five iterations in
/// unsigned Q2.62, shift back with round-to-nearest. DivByZeroError on 0, RangeError if
/// |1/a| is not representable (|a| <= 2^-31).
[[nodiscard]] FixedQ reciprocal(FixedQ a);

[[nodiscard]] inline FixedQ div(FixedQ a, FixedQ b) { return mul(a, reciprocal(b)); }

/// Unchecked two's-complement variants of the loop operators, used for benchmarking.
namespace wrapping {

[[nodiscard]] inline FixedQ add(FixedQ a, FixedQ b) noexcept {
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(static_cast<std::uint64_t>(a.raw()) +
                                                        static_cast<std::uint64_t>(b.raw())));
}

[[nodiscard]] inline FixedQ neg(FixedQ a) noexcept {
  return FixedQ::from_raw(
      static_cast<FixedQ::raw_type>(std::uint64_t{0} - static_cast<std::uint64_t>(a.raw())));
}

[[nodiscard]] inline FixedQ mul(FixedQ a, FixedQ b) noexcept {
  const int128_t wide = (static_cast<int128_t>(a.raw()) * b.raw()) >> FixedQ::kFracBits;
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(static_cast<std::uint64_t>(wide)));
}

}  // namespace wrapping

enum class OverflowPolicy { checked, wrapping };

/// Dispatches the loop operators (add, neg, mul) on an overflow policy at compile time.
template <OverflowPolicy Policy>
struct LoopOps {
  static FixedQ add(FixedQ a, FixedQ b) { return kdebw::add(a, b); }
  static FixedQ neg(FixedQ a) { return kdebw::neg(a); }
  static FixedQ mul(FixedQ a, FixedQ b) { return kdebw::mul(a, b); }
};

template <>
struct LoopOps<OverflowPolicy::wrapping> {
  static FixedQ add(FixedQ a, FixedQ b) noexcept { return wrapping::add(a, b); }
  static FixedQ neg(FixedQ a) noexcept { return wrapping::neg(a); }
  static FixedQ mul(FixedQ a, FixedQ b) noexcept { return wrapping::mul(a, b); }
};

/// Sum of Q32.32 words held at 128-bit raw width. Integer addition is associative, so any
/// partition or order of the same terms produces the same bits.
class FixedAccumulator {
 public:
  constexpr FixedAccumulator() noexcept = default;

  constexpr void add(FixedQ v) noexcept { sum_ += v.raw(); }
  constexpr void add(const FixedAccumulator& other) noexcept { sum_ += other.sum_; }

  /// Adds `v` scaled by an integer count.
  constexpr void add_scaled(FixedQ v, std::int64_t count) noexcept {
    sum_ += static_cast<int128_t>(v.raw()) * count;
  }

  [[nodiscard]] constexpr int128_t raw() const noexcept { return sum_; }

  /// Checked narrowing back to one word.
  [[nodiscard]] FixedQ to_fixed() const;

  /// sum / count with round-to-nearest (ties away from zero), checked narrowing.
  [[nodiscard]] FixedQ divided_by(std::uint64_t count) const;

  friend constexpr bool operator==(const FixedAccumulator&,
                                   const FixedAccumulator&) noexcept = default;

 private:
  int128_t sum_ = 0;
};

/// Serialized layout: raw word, two's complement, little-endian.
[[nodiscard]] std::array<std::byte, 8> to_bytes(FixedQ q) noexcept;
[[nodiscard]] FixedQ from_bytes(const std::array<std::byte, 8>& bytes) noexcept;

}  // namespace kdebw
