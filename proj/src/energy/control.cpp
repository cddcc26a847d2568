#include "dcim/energy/control.hpp"

#include <algorithm>
#include <cmath>

namespace dcim::energy {

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::RaisePumpSpeed: return "raise_pump_speed";
    case ActionKind::RaiseChilledWaterSetpoint: return "raise_chilled_water_setpoint";
    case ActionKind::CurbNoncritical: return "curb_noncritical";
    case ActionKind::Consolidate: return "consolidate";
    case ActionKind::None: return "none";
  }
  return "?";
}

EnergyConfig EnergyConfig::from_json(const nlohmann::json& j) {
  EnergyConfig c;
  c.lead_s = j.value("lead_s", c.lead_s);
  c.surge_threshold = j.value("surge_threshold", c.surge_threshold);
  c.cp_j_per_kg_k = j.value("cp_j_per_kg_k", c.cp_j_per_kg_k);
  c.freq_floor_hz = j.value("freq_floor_hz", c.freq_floor_hz);
  c.consolidation_util = j.value("consolidation_util", c.consolidation_util);
  c.chilled_water_step_c = j.value("chilled_water_step_c", c.chilled_water_step_c);
  c.overhead_frac = j.value("overhead_frac", c.overhead_frac);
  c.compressor_savings_frac = j.value("compressor_savings_frac", c.compressor_savings_frac);
  return c;
}

nlohmann::json EnergyConfig::to_json() const {
  return nlohmann::json{{"lead_s", lead_s},
                        {"surge_threshold", surge_threshold},
                        {"cp_j_per_kg_k", cp_j_per_kg_k},
                        {"freq_floor_hz", freq_floor_hz},
                        {"consolidation_util", consolidation_util},
                        {"chilled_water_step_c", chilled_water_step_c},
                        {"overhead_frac", overhead_frac},
                        {"compressor_savings_frac", compressor_savings_frac}};
}

namespace {

ControlAction none_action(std::int64_t now_tick, const std::string& why) {
  ControlAction a;
  a.kind = ActionKind::None;
  a.effective_at = now_tick;
  a.reason.source = why;
  return a;
}

}  // namespace

ControlAction predictive_control_step(const std::vector<double>& window, std::int64_t now_tick,
                                      const EnergyConfig& config, double tick_s) {
  const int n = static_cast<int>(window.size());
  if (n < 6) return none_action(now_tick, "insufficient-history");

  double mean = 0.0;
  for (double v : window) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : window) var += (v - mean) * (v - mean);
  if (var < 1e-12) return none_action(now_tick, "no-periodicity");

  // Dominant period = autocorrelation peak over lags 2..n/2. Small lags
  // of any slowly varying signal correlate strongly with themselves, so
  // the peak is taken after the autocorrelation first dips below zero
  // (the usual pitch-detection rule); if it never does, fall back to the
  // global peak.
  std::vector<double> r_by_lag(static_cast<std::size_t>(n / 2 + 1), 0.0);
  int first_negative = 0;
  for (int lag = 2; lag <= n / 2; ++lag) {
    double acc = 0.0;
    for (int i = 0; i + lag < n; ++i) acc += (window[i] - mean) * (window[i + lag] - mean);
    r_by_lag[lag] = acc / var;
    if (first_negative == 0 && r_by_lag[lag] < 0.0) first_negative = lag;
  }
  int best_lag = 0;
  double best_r = 0.0;
  for (int lag = std::max(2, first_negative); lag <= n / 2; ++lag) {
    if (r_by_lag[lag] > best_r) {
      best_r = r_by_lag[lag];
      best_lag = lag;
    }
  }
  if (best_lag == 0 || best_r < config.surge_threshold)
    return none_action(now_tick, "no-periodicity");
  if (n < 2 * best_lag) return none_action(now_tick, "insufficient-history");

  // Surge starts: upward crossings of the window midpoint.
  auto [lo_it, hi_it] = std::minmax_element(window.begin(), window.end());
  double level = (*lo_it + *hi_it) / 2.0;
  int last_start = -1;
  for (int i = 1; i < n; ++i)
    if (window[i - 1] < level && window[i] >= level) last_start = i;
  if (last_start < 0) return none_action(now_tick, "no-surge-observed");

  std::int64_t window_first_tick = now_tick - n + 1;
  std::int64_t predicted = window_first_tick + last_start;
  while (predicted <= now_tick) predicted += best_lag;

  std::int64_t lead_ticks = std::llround(config.lead_s / tick_s);
  ControlAction a;
  a.kind = ActionKind::RaisePumpSpeed;
  a.magnitude = 1.0;
  a.effective_at = predicted - lead_ticks;
  a.reason.source = "predictive-surge";
  a.reason.evidence.push_back({"workload", "period_ticks", std::int64_t(best_lag)});
  a.reason.evidence.push_back({"workload", "autocorrelation", best_r});
  a.reason.evidence.push_back({"workload", "predicted_surge_tick", predicted});
  return a;
}

std::vector<ControlAction> policy_actions(const GridState& state, const EnergyConfig& config,
                                          std::int64_t now_tick) {
  std::vector<ControlAction> actions;
  if (state.grid_freq_hz < config.freq_floor_hz) {
    ControlAction a;
    a.kind = ActionKind::CurbNoncritical;
    a.magnitude = config.freq_floor_hz - state.grid_freq_hz;
    a.effective_at = now_tick;
    a.reason.source = "demand-response";
    a.reason.evidence.push_back({"grid", "freq_hz", state.grid_freq_hz});
    actions.push_back(std::move(a));
  }
  if (state.night && state.utilization_frac < config.consolidation_util) {
    ControlAction consolidate;
    consolidate.kind = ActionKind::Consolidate;
    consolidate.magnitude = state.utilization_frac;
    consolidate.effective_at = now_tick;
    consolidate.reason.source = "night-consolidation";
    consolidate.reason.evidence.push_back({"hall", "utilization_frac", state.utilization_frac});
    actions.push_back(std::move(consolidate));

    ControlAction setpoint;
    setpoint.kind = ActionKind::RaiseChilledWaterSetpoint;
    setpoint.magnitude = config.chilled_water_step_c;
    setpoint.effective_at = now_tick;
    setpoint.reason.source = "night-consolidation";
    setpoint.reason.evidence.push_back(
        {"chiller", "estimated_savings_frac", config.compressor_savings_frac});
    actions.push_back(std::move(setpoint));
  }
  return actions;
}

}  // namespace dcim::energy
