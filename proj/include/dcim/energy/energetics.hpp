#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

namespace dcim::energy {

inline constexpr double kKbtuPerKwh = 3.412;   // 1 kW = 3.412 kBTU/h
inline constexpr double kKbtuPerTon = 12.0;    // 12 kBTU/h = 1 ton of cooling
inline constexpr double kCfmPerKw = 100.0;     // 500 CFM per 5 kW
inline constexpr double kWaterCpJPerKgK = 4186.0;

struct RackPowerModel {
  int gpus_per_server = 8;
  double gpu_tdp_w = 700.0;
  int servers = 8;
  double overhead_frac = 0.05;  // CPUs, memory, auxiliary devices
};

struct CoolantLoopSpec {
  double flow_lpm = 0.0;
  double delta_t_k = 0.0;
  double cp_j_per_kg_k = kWaterCpJPerKgK;
  double density_kg_per_l = 1.0;
  double pump_power_kw = 0.0;
};

struct EfficiencyReport {
  double pue = 1.0;              // total facility power / IT power, >= 1
  double cue_work_per_kwh = 0.0;
  double tre = 0.0;              // fraction of waste heat reused
  double cue2_kg_per_kwh = 0.0;  // kg CO2 per IT kWh
  double it_share = 1.0;
  double overhead_share = 0.0;
};

double rack_power_kw(const RackPowerModel& m);

// kW -> (kBTU/h, cooling tons).
std::pair<double, double> heat_output(double kw);

double airflow_required_cfm(double kw);

// Q = m_dot * cp * dT for the loop's flow and temperature rise.
double coolant_heat_removal_kw(const CoolantLoopSpec& spec);

// Exact inverse of coolant_heat_removal_kw; throws on delta_t_k = 0.
double required_coolant_flow_lpm(double load_kw, double delta_t_k,
                                 double cp_j_per_kg_k = kWaterCpJPerKgK,
                                 double density_kg_per_l = 1.0);

// (IT MW, total facility MW) for a hall of rack loads.
std::pair<double, double> hall_aggregate(const std::vector<double>& rack_loads_kw,
                                         double overhead_frac);

EfficiencyReport efficiency_report(double total_kw, double it_kw, double carbon_kg,
                                   double it_kwh, double reused_heat_kwh_t,
                                   double total_heat_kwh_t, double work_units);

nlohmann::json efficiency_to_json(const EfficiencyReport& r);

}  // namespace dcim::energy
