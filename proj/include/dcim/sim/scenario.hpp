#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dcim/energy/control.hpp"

namespace dcim::sim {

enum class WorkloadKind { Square, Burst, Constant, Noise };

struct WorkloadPattern {
  WorkloadKind kind = WorkloadKind::Constant;
  double low = 0.0;    // percent
  double high = 100.0; // percent
  int period = 60;     // ticks per full cycle (square)
};

struct FaultInjection {
  std::int64_t tick = 0;
  std::string node_id;
  std::map<std::string, double> effect;  // flow_scale, vibration, ...
};

struct AttributeSeed {
  std::string node_id;
  std::map<std::string, Scalar> structural;
};

struct SimConfig {
  energy::EnergyConfig energy;
  energy::RackPowerModel rack_model;
  double rack_nominal_kw = 0.0;  // overrides rack_model when > 0
  double carbon_kg_per_kwh = 0.36;
  double temp_in_c = 27.0;
  double rack_temp_limit_c = 45.0;
  double thermal_alpha = 0.06;   // first-order loop response per tick
  double idle_floor_frac = 0.30;
  double redistribution_kw = 180.0;
  bool controller_enabled = true;
};

struct Scenario {
  std::string name;
  std::int64_t duration_ticks = 1;
  double tick_s = 1.0;
  std::uint64_t seed = 0;
  std::vector<nlohmann::json> topology;  // UDCP documents applied in order
  std::vector<AttributeSeed> attributes;
  WorkloadPattern workload;
  std::vector<FaultInjection> faults;
  SimConfig config;

  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Deterministic per (pattern, seed); every value within [low, high].
std::vector<double> generate_workload(std::uint64_t seed, const WorkloadPattern& pattern,
                                      std::int64_t ticks);

}  // namespace dcim::sim
