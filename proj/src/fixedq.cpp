#include "kdebw/fixedq.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace kdebw {

namespace {

constexpr int kNewtonIterations = 5;
constexpr int kWorkFracBits = 62;  // unsigned Q2.62 working format

constexpr std::uint64_t ratio_q62(std::uint64_t num, std::uint64_t den) {
  const uint128_t scaled = static_cast<uint128_t>(num) << kWorkFracBits;
  return static_cast<std::uint64_t>((scaled + den / 2) / den);
}

constexpr std::uint64_t kSeedOffset = ratio_q62(48, 17);
constexpr std::uint64_t kSeedSlope = ratio_q62(32, 17);
constexpr std::uint64_t kTwoQ62 = std::uint64_t{2} << kWorkFracBits;

constexpr std::uint64_t mul_q62(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<uint128_t>(a) * b) >> kWorkFracBits);
}

}  // namespace

void throw_overflow(const char* op) {
  throw OverflowError(std::string("fixed-point overflow in ") + op);
}

FixedQ FixedQ::from_int(std::int64_t value) {
  constexpr std::int64_t kLimit = (std::int64_t{1} << 31) - 1;
  if (value > kLimit || value < -kLimit) {
    throw RangeError("integer " + std::to_string(value) + " outside Q32.32 range");
  }
  return FixedQ(value * kOneRaw);
}

FixedQ encode(double v) {
  if (!std::isfinite(v) || std::fabs(v) >= 0x1p31) {
    throw RangeError("value " + std::to_string(v) + " outside Q32.32 range");
  }
  // v * 2^32 is exact; llround rounds half away from zero.
  return FixedQ::from_raw(std::llround(v * 0x1p32));
}

FixedQ reciprocal(FixedQ a) {
  if (a.raw() == 0) throw DivByZeroError("reciprocal of zero");
  const bool negative = a.raw() < 0;
  const std::uint64_t mag =
      negative ? std::uint64_t{0} - static_cast<std::uint64_t>(a.raw()) : static_cast<std::uint64_t>(a.raw());
  if (mag <= 2) throw RangeError("reciprocal not representable: |a| <= 2^-31");

  // a = b * 2^(msb + 1 - 32) with b in [0.5, 1).
  const int msb = std::bit_width(mag) - 1;
  const std::uint64_t b = msb <= kWorkFracBits - 1 ? mag << (kWorkFracBits - 1 - msb)
                                                   : mag >> (msb - (kWorkFracBits - 1));

  std::uint64_t y = kSeedOffset - mul_q62(kSeedSlope, b);
  for (int i = 0; i < kNewtonIterations; ++i) {
    y = mul_q62(y, kTwoQ62 - mul_q62(b, y));
  }

  // 1/a = y * 2^(31 - msb); in raw units that is y_q62 * 2^(1 - msb).
  std::uint64_t mag_out = y;
  if (msb >= 2) {
    const int shift = msb - 1;
    mag_out = static_cast<std::uint64_t>((static_cast<uint128_t>(y) + (uint128_t{1} << (shift - 1))) >> shift);
  }
  if (mag_out > static_cast<std::uint64_t>(FixedQ::kMaxRaw)) {
    throw RangeError("reciprocal not representable");
  }
  const auto out = static_cast<FixedQ::raw_type>(mag_out);
  return FixedQ::from_raw(negative ? -out : out);
}

FixedQ FixedAccumulator::to_fixed() const {
  if (sum_ > FixedQ::kMaxRaw || sum_ < FixedQ::kMinRaw) throw_overflow("accumulator narrowing");
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(sum_));
}

FixedQ FixedAccumulator::divided_by(std::uint64_t count) const {
  if (count == 0) throw DivByZeroError("accumulator divided by zero count");
  const bool negative = sum_ < 0;
  const uint128_t mag = negative ? uint128_t{0} - static_cast<uint128_t>(sum_) : static_cast<uint128_t>(sum_);
  const uint128_t q = (mag + count / 2) / count;
  if (q > static_cast<uint128_t>(FixedQ::kMaxRaw)) throw_overflow("accumulator division");
  const auto out = static_cast<FixedQ::raw_type>(q);
  return FixedQ::from_raw(negative ? -out : out);
}

std::array<std::byte, 8> to_bytes(FixedQ q) noexcept {
  std::array<std::byte, 8> out{};
  auto bits = static_cast<std::uint64_t>(q.raw());
  for (auto& b : out) {
    b = static_cast<std::byte>(bits & 0xFFu);
    bits >>= 8;
  }
  return out;
}

FixedQ from_bytes(const std::array<std::byte, 8>& bytes) noexcept {
  std::uint64_t bits = 0;
  for (std::size_t i = bytes.size(); i-- > 0;) {
    bits = (bits << 8) | std::to_integer<std::uint64_t>(bytes[i]);
  }
  return FixedQ::from_raw(static_cast<FixedQ::raw_type>(bits));
}

}  // namespace kdebw
