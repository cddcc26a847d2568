#include "dcim/energy/energetics.hpp"

#include <numeric>
#include <stdexcept>

namespace dcim::energy {

double rack_power_kw(const RackPowerModel& m) {
  if (m.gpus_per_server < 0 || m.gpu_tdp_w < 0 || m.servers < 0)
    throw std::invalid_argument("rack power model fields must be non-negative");
  if (m.overhead_frac < 0 || m.overhead_frac > 0.5)
    throw std::invalid_argument("overhead_frac must be in [0, 0.5]");
  return m.gpus_per_server * m.gpu_tdp_w * m.servers * (1.0 + m.overhead_frac) / 1000.0;
}

std::pair<double, double> heat_output(double kw) {
  if (kw < 0) throw std::invalid_argument("power must be non-negative");
  double kbtu = kw * kKbtuPerKwh;
  return {kbtu, kbtu / kKbtuPerTon};
}

double airflow_required_cfm(double kw) {
  if (kw < 0) throw std::invalid_argument("power must be non-negative");
  return kw * kCfmPerKw;
}

double coolant_heat_removal_kw(const CoolantLoopSpec& spec) {
  if (spec.flow_lpm < 0 || spec.delta_t_k < 0)
    throw std::invalid_argument("flow and delta-T must be non-negative");
  double mass_flow_kg_s = spec.flow_lpm * spec.density_kg_per_l / 60.0;
  return mass_flow_kg_s * spec.cp_j_per_kg_k * spec.delta_t_k / 1000.0;
}

double required_coolant_flow_lpm(double load_kw, double delta_t_k, double cp_j_per_kg_k,
                                 double density_kg_per_l) {
  if (delta_t_k == 0.0) throw std::invalid_argument("delta_t_k must be non-zero");
  return load_kw * 1000.0 * 60.0 / (density_kg_per_l * cp_j_per_kg_k * delta_t_k);
}

std::pair<double, double> hall_aggregate(const std::vector<double>& rack_loads_kw,
                                         double overhead_frac) {
  if (overhead_frac < 0) throw std::invalid_argument("overhead_frac must be non-negative");
  double it_mw = std::accumulate(rack_loads_kw.begin(), rack_loads_kw.end(), 0.0) / 1000.0;
  return {it_mw, it_mw * (1.0 + overhead_frac)};
}

EfficiencyReport efficiency_report(double total_kw, double it_kw, double carbon_kg,
                                   double it_kwh, double reused_heat_kwh_t,
                                   double total_heat_kwh_t, double work_units) {
  if (it_kw <= 0) throw std::invalid_argument("it_kw must be positive");
  if (total_kw < it_kw) throw std::invalid_argument("total_kw must be >= it_kw");
  if (total_heat_kwh_t < reused_heat_kwh_t)
    throw std::invalid_argument("total heat must be >= reused heat");
  EfficiencyReport r;
  r.pue = total_kw / it_kw;
  r.cue2_kg_per_kwh = it_kwh > 0 ? carbon_kg / it_kwh : 0.0;
  r.tre = total_heat_kwh_t > 0 ? reused_heat_kwh_t / total_heat_kwh_t : 0.0;
  r.cue_work_per_kwh = it_kwh > 0 ? work_units / it_kwh : 0.0;
  r.it_share = it_kw / total_kw;
  r.overhead_share = (total_kw - it_kw) / total_kw;
  return r;
}

nlohmann::json efficiency_to_json(const EfficiencyReport& r) {
  return nlohmann::json{{"pue", r.pue},
                        {"cue_work_per_kwh", r.cue_work_per_kwh},
                        {"tre", r.tre},
                        {"cue2_kg_per_kwh", r.cue2_kg_per_kwh},
                        {"it_share", r.it_share},
                        {"overhead_share", r.overhead_share}};
}

}  // namespace dcim::energy
