#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcim/energy/energetics.hpp"
#include "dcim/reason/rules.hpp"

namespace dcim::energy {

enum class ActionKind {
  RaisePumpSpeed,
  RaiseChilledWaterSetpoint,
  CurbNoncritical,
  Consolidate,
  None,
};

const char* to_string(ActionKind k);

struct ControlAction {
  ActionKind kind = ActionKind::None;
  double magnitude = 0.0;        // kind-specific scalar
  std::int64_t effective_at = 0; // tick
  reason::Explanation reason;
};

struct EnergyConfig {
  double lead_s = 5.0;
  double surge_threshold = 0.6;  // minimum autocorrelation peak
  double cp_j_per_kg_k = kWaterCpJPerKgK;
  double freq_floor_hz = 59.9;
  double consolidation_util = 0.40;
  double chilled_water_step_c = 2.0;
  double overhead_frac = 0.10;
  double compressor_savings_frac = 0.05;

  static EnergyConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Periodicity-aware surge anticipation. The window holds utilization
// percentages sampled once per tick, ending at now_tick. Detects the
// dominant period by autocorrelation; when the next surge start can be
// predicted, schedules a pump-speed raise lead_s seconds ahead of it.
ControlAction predictive_control_step(const std::vector<double>& window, std::int64_t now_tick,
                                      const EnergyConfig& config, double tick_s = 1.0);

struct GridState {
  double grid_freq_hz = 60.0;
  bool night = false;
  double utilization_frac = 1.0;
};

std::vector<ControlAction> policy_actions(const GridState& state, const EnergyConfig& config,
                                          std::int64_t now_tick = 0);

}  // namespace dcim::energy
