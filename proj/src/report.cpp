#include "kdebw/report.hpp"

#include <chrono>
#include <cstdio>

namespace kdebw {

namespace {

struct FixedField {
  const char* name;
  FixedQ BandwidthResult::*member;
};

constexpr FixedField kFields[] = {
    {"v_hat", &BandwidthResult::v_hat},   {"sigma_hat", &BandwidthResult::sigma_hat},
    {"psi8", &BandwidthResult::psi8},     {"g1", &BandwidthResult::g1},
    {"psi6", &BandwidthResult::psi6},     {"g2", &BandwidthResult::g2},
    {"psi4", &BandwidthResult::psi4},     {"h_std", &BandwidthResult::h_std},
    {"h_final", &BandwidthResult::h_final},
};

std::string long_decimal(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

}  // namespace

nlohmann::json fixed_to_json(FixedQ q) {
  return nlohmann::json{{"value", decode(q)}, {"raw", q.raw()}};
}

FixedQ fixed_from_json(const nlohmann::json& j) {
  return FixedQ::from_raw(j.at("raw").get<FixedQ::raw_type>());
}

nlohmann::json to_json(const BandwidthResult& r, std::size_t n) {
  nlohmann::json j;
  j["n"] = n;
  j["strategy"] = std::string(to_string(r.strategy));
  for (const auto& f : kFields) j[f.name] = fixed_to_json(r.*f.member);
  j["elapsed_seconds"] = std::chrono::duration<double>(r.elapsed).count();
  return j;
}

BandwidthResult bandwidth_result_from_json(const nlohmann::json& j) {
  BandwidthResult r;
  r.strategy = parse_strategy(j.at("strategy").get<std::string>());
  for (const auto& f : kFields) r.*f.member = fixed_from_json(j.at(f.name));
  r.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::duration<double>(j.value("elapsed_seconds", 0.0)));
  return r;
}

nlohmann::json to_json(const oracle::ComparisonReport& report) {
  nlohmann::json per_step = nlohmann::json::object();
  for (const auto& s : report.per_step) {
    per_step[s.name] = {{"fixed", s.fixed}, {"ref", s.ref}, {"delta_percent", s.delta_percent}};
  }
  return nlohmann::json{{"n", report.n},
                        {"strategy", std::string(to_string(report.strategy))},
                        {"h_fixed", report.h_fixed},
                        {"h_ref", report.h_ref},
                        {"delta_percent", report.delta_percent},
                        {"per_step", per_step}};
}

nlohmann::json to_json(const PolyApprox& poly) {
  nlohmann::json coefficients = nlohmann::json::array();
  for (std::size_t i = 0; i < poly.coefficients.size(); ++i) {
    nlohmann::json c{{"power", i}, {"decimal", long_decimal(poly.coefficients[i])}};
    if (poly.coefficients_q62[i]) {
      c["q62"] = *poly.coefficients_q62[i];
    } else {
      c["q62"] = nullptr;
    }
    coefficients.push_back(c);
  }
  return nlohmann::json{{"target", std::string(to_string(poly.target))},
                        {"degree", poly.degree},
                        {"domain", {long_decimal(poly.lo), long_decimal(poly.hi)}},
                        {"coefficients", coefficients},
                        {"certified_max_abs_error", static_cast<double>(poly.certified_max_abs_error)},
                        {"equioscillation_points", poly.equioscillation_points},
                        {"iterations", poly.iterations}};
}

nlohmann::json to_json(const std::vector<BenchRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n}, {"strategy", std::string(to_string(r.strategy))}, {"seconds", r.seconds}});
  }
  return out;
}

}  // namespace kdebw
