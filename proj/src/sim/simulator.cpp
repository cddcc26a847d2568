#include "dcim/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "dcim/energy/energetics.hpp"
#include "dcim/graph/ingest.hpp"
#include "dcim/reason/causal.hpp"
#include "dcim/udcp/store.hpp"
#include "dcim/udcp/wire.hpp"

namespace dcim::sim {

namespace {

using graph::GraphStore;
using graph::Node;
using graph::NodeId;

struct LoopState {
  NodeId id;
  double base_flow_lpm = 0.0;
  double flow_scale = 1.0;
  double delta_t_k = 0.0;
};

struct PumpState {
  NodeId id;
  NodeId loop_id;
  double pump_power_kw = 0.0;
  double vibration = 2.0;
};

double structural_number(const Node& n, const std::string& attr, double fallback) {
  auto it = n.structural_attrs.find(attr);
  if (it == n.structural_attrs.end()) return fallback;
  if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
  if (std::holds_alternative<std::int64_t>(it->second))
    return double(std::get<std::int64_t>(it->second));
  return fallback;
}

}  // namespace

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  return Scenario::from_json(j);
}

SimReport run_scenario(const Scenario& scenario) {
  udcp::ConnectivityStore store;
  GraphStore g;

  for (const nlohmann::json& doc : scenario.topology) {
    udcp::UdcpMessage msg = udcp::message_from_json(doc);
    udcp::UdcpResult result = store.apply_message(msg);
    if (result.status != udcp::Status::Applied) {
      std::string detail;
      for (const auto& v : result.errors) detail += " [" + v.code + " " + v.path + "]";
      throw std::runtime_error("scenario topology rejected (" + msg.transaction_id + "):" + detail);
    }
    graph::ingest_udcp(g, result);
  }

  {
    auto view = g.view();
    for (const AttributeSeed& seed : scenario.attributes) {
      const Node* existing = view->find_node(seed.node_id);
      if (!existing)
        throw std::runtime_error("scenario attribute seed references unknown node '" +
                                 seed.node_id + "'");
      Node n;
      n.node_id = seed.node_id;
      n.label = existing->label;
      n.structural_attrs = seed.structural;
      g.upsert_node(n);
    }
  }

  // Discover the thermal topology from the graph.
  std::vector<NodeId> racks;
  std::vector<LoopState> loops;
  std::vector<PumpState> pumps;
  std::map<NodeId, int> loop_index;
  {
    auto view = g.view();
    for (const auto& [id, node] : view->nodes()) {
      if (node.label == "Rack") racks.push_back(id);
      else if (node.label == "CoolantLoop") {
        loop_index[id] = static_cast<int>(loops.size());
        loops.push_back({id, structural_number(node, "flow_lpm", 0.0), 1.0, 0.0});
      }
    }
    for (const auto& [id, node] : view->nodes()) {
      if (node.label != "Pump") continue;
      PumpState p;
      p.id = id;
      p.pump_power_kw = structural_number(node, "pump_power_kw", 0.0);
      p.vibration = structural_number(node, "vibration_nominal", 2.0);
      for (const auto& eid : view->incident(id)) {
        const graph::Edge& e = *view->find_edge(eid);
        if (e.kind != graph::EdgeKind::ConnectedTo) continue;
        const NodeId& other = e.from == id ? e.to : e.from;
        if (loop_index.count(other)) { p.loop_id = other; break; }
      }
      pumps.push_back(std::move(p));
    }
  }
  const int n_racks = static_cast<int>(racks.size());
  const int n_loops = static_cast<int>(loops.size());

  // Rack -> loop heat shares; a redistribution shifts weight between loops
  // while every row keeps summing to one.
  std::vector<std::vector<double>> weight(n_racks, std::vector<double>(std::max(n_loops, 1), 0.0));
  {
    auto view = g.view();
    for (int r = 0; r < n_racks; ++r) {
      for (const auto& eid : view->incident(racks[r])) {
        const graph::Edge& e = *view->find_edge(eid);
        if (e.kind != graph::EdgeKind::ConnectedTo) continue;
        const NodeId& other = e.from == racks[r] ? e.to : e.from;
        if (auto it = loop_index.find(other); it != loop_index.end()) {
          weight[r][it->second] = 1.0;
          break;
        }
      }
    }
  }

  const SimConfig& cfg = scenario.config;
  double rack_nominal = cfg.rack_nominal_kw > 0 ? cfg.rack_nominal_kw
                                                : energy::rack_power_kw(cfg.rack_model);
  std::vector<double> trace =
      generate_workload(scenario.seed, scenario.workload, scenario.duration_ticks);

  std::map<std::int64_t, std::vector<const FaultInjection*>> faults_by_tick;
  for (const FaultInjection& f : scenario.faults) faults_by_tick[f.tick].push_back(&f);

  std::vector<reason::Rule> rules = reason::builtin_rules();

  SimReport report;
  report.scenario = scenario.name;
  report.seed = scenario.seed;

  std::set<std::string> seen_anomalies;
  std::set<NodeId> redistributed_loops;
  std::vector<double> util_window;
  std::int64_t last_predicted_action = -1;
  double pump_total_kw = 0.0;
  for (const PumpState& p : pumps) pump_total_kw += p.pump_power_kw;

  for (std::int64_t tick = 0; tick < scenario.duration_ticks; ++tick) {
    if (auto it = faults_by_tick.find(tick); it != faults_by_tick.end()) {
      for (const FaultInjection* f : it->second) {
        for (PumpState& p : pumps) {
          if (p.id != f->node_id) continue;
          if (auto e = f->effect.find("flow_scale"); e != f->effect.end()) {
            if (auto li = loop_index.find(p.loop_id); li != loop_index.end())
              loops[li->second].flow_scale = e->second;
          }
          if (auto e = f->effect.find("vibration"); e != f->effect.end()) p.vibration = e->second;
        }
        if (auto li = loop_index.find(f->node_id); li != loop_index.end()) {
          if (auto e = f->effect.find("flow_scale"); e != f->effect.end())
            loops[li->second].flow_scale = e->second;
        }
      }
    }

    double util = trace[tick];
    double factor = cfg.idle_floor_frac + (1.0 - cfg.idle_floor_frac) * util / 100.0;
    double rack_power = rack_nominal * factor;
    double it_kw = rack_power * n_racks;

    // Heat into each loop; all consumed electrical energy ends as heat.
    std::vector<double> loop_heat(std::max(n_loops, 1), 0.0);
    double heat_total = 0.0;
    for (int r = 0; r < n_racks; ++r) {
      for (int l = 0; l < n_loops; ++l) {
        loop_heat[l] += rack_power * weight[r][l];
        heat_total += rack_power * weight[r][l];
      }
    }

    // First-order loop response towards the steady-state delta-T.
    for (int l = 0; l < n_loops; ++l) {
      double flow = loops[l].base_flow_lpm * loops[l].flow_scale;
      double target;
      if (flow <= 1e-9) {
        target = loop_heat[l] > 0 ? 200.0 : 0.0;  // runaway cap with no flow
      } else {
        target = loop_heat[l] * 1000.0 * 60.0 / (flow * cfg.energy.cp_j_per_kg_k);
      }
      loops[l].delta_t_k += cfg.thermal_alpha * (target - loops[l].delta_t_k);
    }

    double max_rack_temp = cfg.temp_in_c;
    for (int r = 0; r < n_racks; ++r) {
      double dt = 0.0;
      for (int l = 0; l < n_loops; ++l) dt += weight[r][l] * loops[l].delta_t_k;
      double temp_out = cfg.temp_in_c + dt;
      max_rack_temp = std::max(max_rack_temp, temp_out);
      g.apply_state_update({racks[r],
                            {{"power_kw", rack_power},
                             {"temp_in_c", cfg.temp_in_c},
                             {"temp_out_c", temp_out},
                             {"utilization_pct", util}},
                            tick});
    }
    double max_loop_dt = 0.0;
    for (int l = 0; l < n_loops; ++l) {
      max_loop_dt = std::max(max_loop_dt, loops[l].delta_t_k);
      g.apply_state_update({loops[l].id,
                            {{"delta_t_k", loops[l].delta_t_k},
                             {"flow_lpm", loops[l].base_flow_lpm * loops[l].flow_scale}},
                            tick});
    }
    for (const PumpState& p : pumps)
      g.apply_state_update({p.id, {{"vibration", p.vibration}}, tick});

    auto view = g.view();
    reason::RuleOutcome outcome = reason::evaluate_rules(*view, rules, tick);
    for (const auto& update : outcome.state_updates) g.apply_state_update(update);

    for (const reason::Anomaly& a : outcome.anomalies) {
      if (!seen_anomalies.insert(a.anomaly_id).second) continue;
      report.anomalies.push_back({tick, a.anomaly_id, a.kind, a.subject});

      if (a.kind != "coolant-delta-t-high") continue;
      auto causes = reason::infer_causal(*view, a);
      if (!causes.empty()) {
        const reason::CausalCandidate& top = causes.front();
        std::string causal_id = "causal/" + a.anomaly_id + "/" + top.node_id;
        if (seen_anomalies.insert(causal_id).second)
          report.anomalies.push_back({tick, causal_id, top.kind, top.node_id});
      }

      if (cfg.controller_enabled && n_loops > 1 && loop_index.count(a.subject) &&
          redistributed_loops.insert(a.subject).second) {
        int src = loop_index.at(a.subject);
        double q_src = loop_heat[src];
        double moved = std::min(cfg.redistribution_kw, q_src);
        if (q_src > 1e-9 && moved > 0) {
          double frac = moved / q_src;
          for (int r = 0; r < n_racks; ++r) {
            double dw = weight[r][src] * frac;
            if (dw <= 0) continue;
            weight[r][src] -= dw;
            for (int l = 0; l < n_loops; ++l)
              if (l != src) weight[r][l] += dw / (n_loops - 1);
          }
          report.actions.push_back({tick, "redistribute_load", moved, tick,
                                    "moved " + std::to_string(moved) + " kW off " + a.subject +
                                        " to sibling loops"});
        }
      }
    }

    // Predictive thermal control on the utilization window.
    util_window.push_back(util);
    std::size_t window_cap = std::max<std::size_t>(4 * std::max(scenario.workload.period, 1), 60);
    if (util_window.size() > window_cap)
      util_window.erase(util_window.begin(), util_window.end() - window_cap);
    if (cfg.controller_enabled) {
      energy::ControlAction action =
          energy::predictive_control_step(util_window, tick, cfg.energy, scenario.tick_s);
      if (action.kind == energy::ActionKind::RaisePumpSpeed && action.effective_at > tick &&
          action.effective_at != last_predicted_action) {
        last_predicted_action = action.effective_at;
        report.actions.push_back({tick, to_string(action.kind), action.magnitude,
                                  action.effective_at, "anticipated workload surge"});
      }
    }

    double total_kw = it_kw * (1.0 + cfg.energy.overhead_frac) + pump_total_kw;
    double pue = it_kw > 0 ? total_kw / it_kw : 1.0;

    TickSample sample;
    sample.tick = tick;
    sample.power_kw = it_kw;
    sample.heat_kw = heat_total;
    sample.temp_in_c = cfg.temp_in_c;
    sample.temp_out_c = max_rack_temp;
    sample.delta_t = max_loop_dt;
    sample.pue = pue;
    report.series.push_back(sample);
    if (max_rack_temp > cfg.rack_temp_limit_c) ++report.downtime_ticks;
    report.max_temp_out_c = std::max(report.max_temp_out_c, max_rack_temp);
  }

  double pue_sum = 0.0;
  for (const TickSample& s : report.series) pue_sum += s.pue;
  report.mean_pue = report.series.empty() ? 1.0 : pue_sum / report.series.size();
  report.cue2_kg_per_kwh = cfg.carbon_kg_per_kwh;
  return report;
}

}  // namespace dcim::sim
