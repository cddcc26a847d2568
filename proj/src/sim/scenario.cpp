#include "dcim/sim/scenario.hpp"

#include <random>
#include <stdexcept>

namespace dcim::sim {

namespace {

WorkloadKind workload_kind_from_string(const std::string& s) {
  if (s == "square") return WorkloadKind::Square;
  if (s == "burst") return WorkloadKind::Burst;
  if (s == "constant") return WorkloadKind::Constant;
  if (s == "noise") return WorkloadKind::Noise;
  throw std::invalid_argument("unknown workload kind '" + s + "'");
}

const char* workload_kind_to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::Square: return "square";
    case WorkloadKind::Burst: return "burst";
    case WorkloadKind::Constant: return "constant";
    case WorkloadKind::Noise: return "noise";
  }
  return "?";
}

}  // namespace

std::vector<double> generate_workload(std::uint64_t seed, const WorkloadPattern& pattern,
                                      std::int64_t ticks) {
  if (pattern.low < 0 || pattern.low > pattern.high || pattern.high > 100)
    throw std::invalid_argument("workload pattern requires 0 <= low <= high <= 100");
  std::vector<double> trace(ticks, pattern.low);
  std::mt19937_64 rng(seed);
  switch (pattern.kind) {
    case WorkloadKind::Constant:
      break;
    case WorkloadKind::Square: {
      int half = std::max(1, pattern.period / 2);
      for (std::int64_t t = 0; t < ticks; ++t)
        trace[t] = (t % pattern.period) < half ? pattern.low : pattern.high;
      break;
    }
    case WorkloadKind::Noise: {
      std::uniform_real_distribution<double> dist(pattern.low, pattern.high);
      for (auto& v : trace) v = dist(rng);
      break;
    }
    case WorkloadKind::Burst: {
      std::uniform_int_distribution<int> gap(pattern.period / 2, pattern.period * 2);
      std::uniform_int_distribution<int> len(1, std::max(1, pattern.period / 2));
      std::int64_t t = gap(rng);
      while (t < ticks) {
        int burst = len(rng);
        for (int i = 0; i < burst && t + i < ticks; ++i) trace[t + i] = pattern.high;
        t += burst + gap(rng);
      }
      break;
    }
  }
  return trace;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.duration_ticks = j.at("duration_ticks").get<std::int64_t>();
  if (s.duration_ticks < 1) throw std::invalid_argument("duration_ticks must be >= 1");
  s.tick_s = j.value("tick_s", 1.0);
  s.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("topology"))
    for (const auto& doc : j.at("topology")) s.topology.push_back(doc);
  if (j.contains("attributes")) {
    for (const auto& aj : j.at("attributes")) {
      AttributeSeed seed;
      seed.node_id = aj.at("node_id").get<std::string>();
      for (const auto& [k, v] : aj.at("structural").items())
        seed.structural[k] = scalar_from_json(v);
      s.attributes.push_back(std::move(seed));
    }
  }
  if (j.contains("workload")) {
    const auto& wj = j.at("workload");
    s.workload.kind = workload_kind_from_string(wj.at("kind").get<std::string>());
    s.workload.low = wj.value("low", 0.0);
    s.workload.high = wj.value("high", 100.0);
    s.workload.period = wj.value("period", 60);
  }
  if (j.contains("faults")) {
    for (const auto& fj : j.at("faults")) {
      FaultInjection f;
      f.tick = fj.at("tick").get<std::int64_t>();
      f.node_id = fj.at("node_id").get<std::string>();
      for (const auto& [k, v] : fj.at("effect").items()) f.effect[k] = v.get<double>();
      s.faults.push_back(std::move(f));
    }
  }
  if (j.contains("config")) {
    const auto& cj = j.at("config");
    s.config.energy = energy::EnergyConfig::from_json(cj);
    if (cj.contains("rack_model")) {
      const auto& rm = cj.at("rack_model");
      s.config.rack_model.gpus_per_server = rm.value("gpus_per_server", 8);
      s.config.rack_model.gpu_tdp_w = rm.value("gpu_tdp_w", 700.0);
      s.config.rack_model.servers = rm.value("servers", 8);
      s.config.rack_model.overhead_frac = rm.value("overhead_frac", 0.05);
    }
    s.config.rack_nominal_kw = cj.value("rack_nominal_kw", 0.0);
    s.config.carbon_kg_per_kwh = cj.value("carbon_kg_per_kwh", 0.36);
    s.config.temp_in_c = cj.value("temp_in_c", 27.0);
    s.config.rack_temp_limit_c = cj.value("rack_temp_limit_c", 45.0);
    s.config.thermal_alpha = cj.value("thermal_alpha", 0.06);
    s.config.idle_floor_frac = cj.value("idle_floor_frac", 0.30);
    s.config.redistribution_kw = cj.value("redistribution_kw", 180.0);
    s.config.controller_enabled = cj.value("controller_enabled", true);
  }
  return s;
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json attributes = nlohmann::json::array();
  for (const auto& a : this->attributes) {
    nlohmann::json structural = nlohmann::json::object();
    for (const auto& [k, v] : a.structural) structural[k] = scalar_to_json(v);
    attributes.push_back({{"node_id", a.node_id}, {"structural", std::move(structural)}});
  }
  nlohmann::json faults = nlohmann::json::array();
  for (const auto& f : this->faults) {
    nlohmann::json effect = nlohmann::json::object();
    for (const auto& [k, v] : f.effect) effect[k] = v;
    faults.push_back({{"tick", f.tick}, {"node_id", f.node_id}, {"effect", std::move(effect)}});
  }
  nlohmann::json cfg = config.energy.to_json();
  cfg["rack_model"] = {{"gpus_per_server", config.rack_model.gpus_per_server},
                       {"gpu_tdp_w", config.rack_model.gpu_tdp_w},
                       {"servers", config.rack_model.servers},
                       {"overhead_frac", config.rack_model.overhead_frac}};
  cfg["rack_nominal_kw"] = config.rack_nominal_kw;
  cfg["carbon_kg_per_kwh"] = config.carbon_kg_per_kwh;
  cfg["temp_in_c"] = config.temp_in_c;
  cfg["rack_temp_limit_c"] = config.rack_temp_limit_c;
  cfg["thermal_alpha"] = config.thermal_alpha;
  cfg["idle_floor_frac"] = config.idle_floor_frac;
  cfg["redistribution_kw"] = config.redistribution_kw;
  cfg["controller_enabled"] = config.controller_enabled;
  return nlohmann::json{{"name", name},
                        {"duration_ticks", duration_ticks},
                        {"tick_s", tick_s},
                        {"seed", seed},
                        {"topology", topology},
                        {"attributes", std::move(attributes)},
                        {"workload",
                         {{"kind", workload_kind_to_string(workload.kind)},
                          {"low", workload.low},
                          {"high", workload.high},
                          {"period", workload.period}}},
                        {"faults", std::move(faults)},
                        {"config", std::move(cfg)}};
}

}  // namespace dcim::sim
