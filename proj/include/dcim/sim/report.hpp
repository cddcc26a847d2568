#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcim::sim {

struct TickSample {
  std::int64_t tick = 0;
  double power_kw = 0.0;    // total IT draw
  double heat_kw = 0.0;     // total heat delivered to coolant loops
  double temp_in_c = 0.0;
  double temp_out_c = 0.0;  // hottest rack outlet
  double delta_t = 0.0;     // hottest loop delta-T
  double pue = 1.0;

  bool operator==(const TickSample&) const = default;
};

struct ReportedAnomaly {
  std::int64_t tick = 0;
  std::string anomaly_id;
  std::string kind;
  std::string subject;

  bool operator==(const ReportedAnomaly&) const = default;
};

struct ReportedAction {
  std::int64_t tick = 0;
  std::string kind;
  double magnitude = 0.0;
  std::int64_t effective_at = 0;
  std::string detail;

  bool operator==(const ReportedAction&) const = default;
};

struct SimReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<TickSample> series;
  std::vector<ReportedAnomaly> anomalies;
  std::vector<ReportedAction> actions;
  double mean_pue = 1.0;
  double cue2_kg_per_kwh = 0.0;
  double max_temp_out_c = 0.0;
  std::int64_t downtime_ticks = 0;

  bool operator==(const SimReport&) const = default;
};

// Canonical document; throws std::invalid_argument if any series value is
// not finite.
nlohmann::json report_to_json(const SimReport& r);
SimReport report_from_json(const nlohmann::json& j);

// Columns: tick,power_kw,temp_in_c,temp_out_c,delta_t,pue
std::string report_to_csv(const SimReport& r);

}  // namespace dcim::sim
