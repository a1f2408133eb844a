#pragma once

// JSON encodings of library results. Every fixed-point field is written as
// {"value": <decimal>, "raw": <int64 Q32.32 word>} so downstream tools can verify bits.

#include <vector>

#include "json.hpp"
#include "kdebw/bench.hpp"
#include "kdebw/oracle.hpp"
#include "kdebw/plugin.hpp"
#include "kdebw/remez.hpp"

namespace kdebw {

[[nodiscard]] nlohmann::json fixed_to_json(FixedQ q);
[[nodiscard]] FixedQ fixed_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const BandwidthResult& r, std::size_t n);
/// Inverse of to_json for the fixed-point fields and strategy; elapsed is restored
/// from elapsed_seconds.
[[nodiscard]] BandwidthResult bandwidth_result_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const oracle::ComparisonReport& report);
[[nodiscard]] nlohmann::json to_json(const PolyApprox& poly);
[[nodiscard]] nlohmann::json to_json(const std::vector<BenchRow>& rows);

}  // namespace kdebw
