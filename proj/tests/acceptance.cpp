// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dcim/energy/energetics.hpp"
#include "dcim/graph/graph.hpp"
#include "dcim/graph/pattern.hpp"
#include "dcim/reason/intent.hpp"
#include "dcim/reason/rules.hpp"
#include "dcim/sim/simulator.hpp"
#include "dcim/svc/service.hpp"
#include "dcim/udcp/store.hpp"
#include "dcim/udcp/wire.hpp"

using namespace dcim;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool near(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
}

std::string scenario_path(const char* name) {
  return std::string(DCIM_SCENARIO_DIR) + "/" + name + ".json";
}

// ---------------------------------------------------------------------------

bool criterion_rack_power() {
  energy::RackPowerModel m;  // 8 GPUs x 700 W, 8 servers, 5% overhead
  double per_server = m.gpus_per_server * m.gpu_tdp_w / 1000.0;
  double per_rack = per_server * m.servers;
  return near(per_server, 5.6) && near(per_rack, 44.8) && near(energy::rack_power_kw(m), 47.04);
}

bool criterion_heat() {
  auto [kbtu, tons] = energy::heat_output(47.0);
  return near(kbtu, 160.364) && std::abs(tons - 13.36) < 0.01;
}

bool criterion_airflow() {
  return near(energy::airflow_required_cfm(5.0), 500.0) &&
         near(energy::airflow_required_cfm(47.0), 4700.0);
}

bool criterion_hall() {
  auto [it_mw, total_mw] = energy::hall_aggregate(std::vector<double>(1600, 47.0), 0.10);
  return near(it_mw, 75.2) && near(total_mw, 82.72);
}

bool criterion_case_study(std::string& note) {
  auto start = Clock::now();
  sim::Scenario s = sim::load_scenario_file(scenario_path("case-study-hall"));
  sim::SimReport r = sim::run_scenario(s);
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "mean PUE " << r.mean_pue << ", CUE2 " << r.cue2_kg_per_kwh << ", " << r.series.size()
     << " ticks in " << elapsed << " s";
  note = os.str();
  return r.series.size() == 10000 && r.mean_pue >= 1.11 && r.mean_pue <= 1.15 &&
         r.cue2_kg_per_kwh == 0.36 && elapsed < 10.0;
}

bool criterion_pump_failure(std::string& note) {
  auto start = Clock::now();
  sim::Scenario s = sim::load_scenario_file(scenario_path("pump-failure"));
  const std::string& pump = s.faults.at(0).node_id;
  sim::SimReport r = sim::run_scenario(s);

  bool pump_named = false;
  std::int64_t anomaly_tick = -1;
  for (const auto& a : r.anomalies) {
    if (a.kind == "incipient-bearing-failure" && a.subject == pump) pump_named = true;
    if (a.kind == "coolant-delta-t-high" && anomaly_tick < 0) anomaly_tick = a.tick;
  }

  bool conserved = true;
  for (const auto& ts : r.series)
    if (ts.power_kw <= 0 || std::abs(ts.heat_kw - ts.power_kw) / ts.power_kw > 1e-6)
      conserved = false;

  bool redistributed = false;
  for (const auto& a : r.actions)
    if (a.kind == "redistribute_load") redistributed = true;

  // Reflex oracle: rerun with the controller off; the anomaly must come
  // in strictly before the tick where the hall would have overheated.
  sim::Scenario unmitigated = s;
  unmitigated.config.controller_enabled = false;
  sim::SimReport raw = sim::run_scenario(unmitigated);
  std::int64_t first_violation = -1;
  for (const auto& ts : raw.series)
    if (ts.temp_out_c > s.config.rack_temp_limit_c) { first_violation = ts.tick; break; }

  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "anomaly at tick " << anomaly_tick << ", unmitigated violation at " << first_violation
     << ", " << elapsed << " s";
  note = os.str();
  return pump_named && conserved && redistributed && anomaly_tick >= 0 && first_violation >= 0 &&
         anomaly_tick < first_violation && r.downtime_ticks == 0 && elapsed < 5.0;
}

// ---------------------------------------------------------------------------

nlohmann::json make_device(const std::string& id, int panels_per_device, int ports_per_panel) {
  nlohmann::json panels = nlohmann::json::array();
  for (int p = 0; p < panels_per_device; ++p)
    panels.push_back({{"panel_id", "p" + std::to_string(p)},
                      {"elevation_ru", p + 1},
                      {"view", "front"},
                      {"port_count", ports_per_panel},
                      {"port_type", "LC"}});
  return {{"device_id", id},
          {"device_type", "Rack"},
          {"location", {{"hall", "1"}, {"row", "r"}, {"position", id}}},
          {"panels", panels}};
}

nlohmann::json make_endpoint(const std::string& dev, int ru, int port) {
  return {{"device_id", dev}, {"elevation_ru", ru}, {"view", "front"}, {"path", "A"},
          {"port", port}};
}

bool criterion_fuzz_udcp(std::string& note) {
  auto start = Clock::now();
  std::mt19937_64 rng(20240824);
  const int kSequences = 1000;
  int accepted_total = 0, rejected_total = 0;

  for (int seq = 0; seq < kSequences; ++seq) {
    udcp::ConnectivityStore store;
    std::vector<udcp::UdcpMessage> accepted;
    int steps = 4 + int(rng() % 10);
    for (int step = 0; step < steps; ++step) {
      nlohmann::json msg{{"transaction_id", "t" + std::to_string(step)}};
      int dice = int(rng() % 10);
      if (dice < 4) {
        msg["command"] = "create";
        msg["devices"] = nlohmann::json::array(
            {make_device("D" + std::to_string(rng() % 6), 2, 4)});
      } else if (dice < 8) {
        msg["command"] = "create";
        std::string a = "D" + std::to_string(rng() % 6), b = "D" + std::to_string(rng() % 6);
        msg["connections"] = nlohmann::json::array(
            {{{"a", make_endpoint(a, 1 + int(rng() % 2), 1 + int(rng() % 5))},
              {"b", make_endpoint(b, 1 + int(rng() % 2), 1 + int(rng() % 5))},
              {"media", {{"kind", "network"}}}}});
      } else {
        msg["command"] = "delete";
        std::string a = "D" + std::to_string(rng() % 6), b = "D" + std::to_string(rng() % 6);
        msg["connections"] = nlohmann::json::array(
            {{{"a", make_endpoint(a, 1 + int(rng() % 2), 1 + int(rng() % 5))},
              {"b", make_endpoint(b, 1 + int(rng() % 2), 1 + int(rng() % 5))},
              {"media", {{"kind", "network"}}}}});
      }

      udcp::UdcpMessage parsed = udcp::message_from_json(msg);
      std::string before = udcp::serialize_canonical(store.retrieve_asbuilt({}));
      udcp::UdcpResult result = store.apply_message(parsed);
      if (result.status == udcp::Status::Applied) {
        accepted.push_back(parsed);
        ++accepted_total;
      } else {
        ++rejected_total;
        // Atomicity: a rejected message leaves no trace and reports no deltas.
        if (!result.deltas.empty()) return false;
        if (udcp::serialize_canonical(store.retrieve_asbuilt({})) != before) return false;
      }
    }

    // Occupancy: every endpoint appears in at most one connection.
    udcp::UdcpMessage asbuilt = store.retrieve_asbuilt({});
    std::set<std::string> used;
    for (const auto& c : asbuilt.connections) {
      if (!used.insert(udcp::endpoint_key(c.a)).second) return false;
      if (!used.insert(udcp::endpoint_key(c.b)).second) return false;
    }

    // Replay: accepted messages reproduce the store; the as-built message
    // itself round-trips onto an empty store.
    udcp::ConnectivityStore replayed;
    for (const auto& m : accepted)
      if (replayed.apply_message(m).status != udcp::Status::Applied) return false;
    if (!(replayed == store)) return false;

    udcp::ConnectivityStore rebuilt;
    udcp::UdcpMessage create = asbuilt;
    create.command = udcp::Command::Create;
    create.filter.reset();
    if (rebuilt.apply_message(create).status != udcp::Status::Applied) return false;
    if (!(rebuilt == store)) return false;
  }

  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << kSequences << " sequences (" << accepted_total << " applied, " << rejected_total
     << " rejected) in " << elapsed << " s";
  note = os.str();
  return elapsed < 30.0;
}

void random_graph(graph::GraphStore& g, std::mt19937_64& rng) {
  static const char* labels[] = {"Rack", "Switch", "PDU", "Pump", "CoolantLoop"};
  int n = 2 + int(rng() % 49);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    graph::Node node;
    node.node_id = "n" + std::to_string(i);
    node.label = labels[rng() % 5];
    if (rng() % 2) node.structural_attrs["power_kw"] = double(rng() % 100);
    g.upsert_node(node);
    ids.push_back(node.node_id);
  }
  int edges = int(rng() % (2 * n));
  for (int e = 0; e < edges; ++e) {
    std::string a = ids[rng() % ids.size()], b = ids[rng() % ids.size()];
    if (a == b) continue;
    graph::Edge edge;
    edge.edge_id = "e" + std::to_string(e);
    edge.kind = rng() % 2 ? graph::EdgeKind::ConnectedTo : graph::EdgeKind::PoweredBy;
    edge.from = a;
    edge.to = b;
    g.upsert_edge(edge);
  }
  for (const auto& id : ids)
    if (rng() % 2)
      g.apply_state_update({id,
                            {{"temp_c", double(rng() % 120)},
                             {"fan_speed", double(rng() % 100)},
                             {"delta_t_k", double(rng() % 25)}},
                            1});
}

bool criterion_query_equivalence(std::string& note) {
  auto start = Clock::now();
  std::mt19937_64 rng(77);
  auto rules = reason::builtin_rules();
  for (int trial = 0; trial < 200; ++trial) {
    graph::GraphStore g;
    random_graph(g, rng);
    auto view = g.view();

    if (!(reason::evaluate_rules(*view, rules, trial) ==
          reason::evaluate_rules_reference(*view, rules, trial)))
      return false;

    graph::PatternQuery q;
    q.label = "Rack";
    q.node_preds.push_back({"temp_c", CmpOp::Gt, double(rng() % 100)});
    if (rng() % 2) q.counts.push_back({graph::EdgeKind::PoweredBy, graph::Direction::Out,
                                       CmpOp::Lt, 2, true});
    graph::MatchResult fast = graph::match_pattern(*view, q);
    graph::MatchResult slow = graph::match_pattern_reference(*view, q);
    if (fast.rows != slow.rows || fast.warnings != slow.warnings) return false;
  }
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "200 graphs in " << elapsed << " s";
  note = os.str();
  return elapsed < 30.0;
}

bool criterion_query_latency(std::string& note) {
  graph::GraphStore g;
  std::mt19937_64 rng(5150);
  const int kNodes = 100000;
  for (int i = 0; i < kNodes; ++i) {
    graph::Node n;
    n.node_id = "r" + std::to_string(i);
    n.label = i % 10 == 0 ? "Switch" : "Rack";
    n.structural_attrs["power_kw"] = double(rng() % 100);
    n.structural_attrs["zone"] = std::int64_t(i % 64);
    g.upsert_node(n);
  }
  for (int i = 1; i < kNodes; ++i) {
    graph::Edge e;
    e.edge_id = "e" + std::to_string(i);
    e.kind = i % 3 == 0 ? graph::EdgeKind::PoweredBy : graph::EdgeKind::ConnectedTo;
    e.from = "r" + std::to_string(i);
    e.to = "r" + std::to_string(rng() % i);
    g.upsert_edge(e);
  }
  auto view = g.view();
  graph::PatternQuery q;
  q.label = "Rack";
  q.node_preds.push_back({"power_kw", CmpOp::Gt, 50.0});
  q.edges.push_back({graph::EdgeKind::ConnectedTo, graph::Direction::Any, {}, std::nullopt, {}});

  std::vector<double> times;
  std::size_t rows = 0;
  for (int run = 0; run < 9; ++run) {
    auto t0 = Clock::now();
    rows = graph::match_pattern(*view, q).rows.size();
    times.push_back(seconds_since(t0) * 1000.0);
  }
  std::sort(times.begin(), times.end());
  double median_ms = times[times.size() / 2];
  std::ostringstream os;
  os << kNodes << " nodes, " << rows << " rows, median " << median_ms << " ms";
  note = os.str();
  return median_ms < 200.0;
}

// ---------------------------------------------------------------------------

std::string grammar_utterance(std::mt19937_64& rng, graph::PatternQuery* expect) {
  static const std::pair<const char*, const char*> entities[] = {
      {"racks", "Rack"}, {"switches", "Switch"}, {"pdus", "PDU"},
      {"pumps", "Pump"}, {"loops", "CoolantLoop"}, {"halls", "Hall"}};
  static const std::pair<const char*, const char*> attrs[] = {
      {"temperature", "temp_c"}, {"power", "power_kw"},
      {"utilization", "utilization_pct"}, {"vibration", "vibration"}};
  static const std::pair<const char*, CmpOp> ops[] = {
      {">", CmpOp::Gt}, {"<", CmpOp::Lt}, {">=", CmpOp::Ge},
      {"<=", CmpOp::Le}, {"=", CmpOp::Eq}, {"!=", CmpOp::Ne}};

  graph::PatternQuery q;
  std::string text = rng() % 2 ? "show" : "list";
  const auto& [noun, label] = entities[rng() % 6];
  text += std::string(" ") + noun;
  q.label = label;

  if (rng() % 2) {
    bool hall = rng() % 2;
    std::string id = std::to_string(1 + rng() % 9);
    text += std::string(" in ") + (hall ? "hall " : "zone ") + id;
    graph::EdgePattern ep;
    ep.kind = graph::EdgeKind::LocatedIn;
    ep.direction = graph::Direction::Out;
    ep.neighbor_label = hall ? "Hall" : "Zone";
    ep.neighbor_preds.push_back({"name", CmpOp::Eq, id});
    q.edges.push_back(std::move(ep));
  }
  int clauses = int(rng() % 3);
  for (int i = 0; i < clauses; ++i) {
    const auto& [word, attr] = attrs[rng() % 4];
    const auto& [sym, op] = ops[rng() % 6];
    std::int64_t v = std::int64_t(rng() % 200);
    text += std::string(" with ") + word + " " + sym + " " + std::to_string(v);
    q.node_preds.push_back({attr, op, v});
  }
  if (rng() % 3 == 0) {
    text += " and missing redundant power feed";
    q.counts.push_back({graph::EdgeKind::PoweredBy, graph::Direction::Out, CmpOp::Lt, 2, true});
  }
  if (expect) *expect = std::move(q);
  return text;
}

bool criterion_end_to_end(std::string& note) {
  auto start = Clock::now();

  // Grammar totality: 1000 generated utterances compile to the documented query.
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 1000; ++i) {
    graph::PatternQuery expect;
    std::string text = grammar_utterance(rng, &expect);
    try {
      if (!(reason::compile_intent(text) == expect)) return false;
    } catch (const reason::IntentError&) {
      return false;
    }
  }

  // Damage detection: splicing a token from outside the grammar into a
  // valid utterance never yields the same query silently.
  static const char* foreign[] = {"please", "fetch", "racken", "mit", "quickly", "select",
                                  "xyzzy", "temperatur", "drop", "power_mw"};
  int rejected = 0;
  for (int i = 0; i < 200; ++i) {
    graph::PatternQuery expect;
    std::string text = grammar_utterance(rng, &expect);
    std::vector<std::string> words;
    std::istringstream is(text);
    for (std::string w; is >> w;) words.push_back(w);
    words.insert(words.begin() + long(rng() % (words.size() + 1)), foreign[rng() % 10]);
    std::string corrupted;
    for (const auto& w : words) corrupted += (corrupted.empty() ? "" : " ") + w;
    try {
      if (!(reason::compile_intent(corrupted) == expect)) ++rejected;
    } catch (const reason::IntentError&) {
      ++rejected;
    }
  }
  if (rejected != 200) return false;

  // Headless pipeline: build a hall over the wire protocol, feed
  // telemetry, answer an operator question, and simulate a scenario.
  std::string data_dir =
      (std::filesystem::temp_directory_path() /
       ("dcim-acceptance-" + std::to_string(std::random_device{}()))).string();
  svc::ServiceOptions options;
  options.data_dir = data_dir;
  options.scenario_dir = DCIM_SCENARIO_DIR;
  svc::Service service(options);

  nlohmann::json build{{"command", "create"}, {"transaction_id", "acceptance-hall"}};
  build["devices"] = nlohmann::json::array();
  build["devices"].push_back(make_device("PDU-1", 1, 48));
  for (int i = 0; i < 8; ++i)
    build["devices"].push_back(make_device("R-" + std::to_string(i), 2, 4));
  build["connections"] = nlohmann::json::array();
  for (int i = 0; i < 8; ++i)
    build["connections"].push_back({{"a", make_endpoint("R-" + std::to_string(i), 2, 1)},
                                    {"b", make_endpoint("PDU-1", 1, i + 1)},
                                    {"media", {{"kind", "power"}}}});
  if (service.handle_udcp(build.dump()).status != 200) return false;

  for (int i = 0; i < 8; ++i)
    service.graph_store().apply_state_update(
        {"R-" + std::to_string(i), {{"power_kw", 40.0 + i}, {"temp_c", 30.0 + i}}, 1});

  svc::HttpResponse answer =
      service.handle_intent("show racks with temperature > 33 and missing redundant power feed");
  if (answer.status != 200) return false;
  if (answer.body.at("rows") != nlohmann::json::array({"R-4", "R-5", "R-6", "R-7"}))
    return false;

  svc::HttpResponse metrics = service.handle_metrics();
  if (metrics.status != 200 || metrics.body.at("pue").get<double>() < 1.0) return false;

  svc::HttpResponse report =
      service.handle_simulate(nlohmann::json{{"scenario", "pump-failure"}}.dump());
  if (report.status != 200) return false;
  if (report.body.at("summary").at("downtime_ticks") != 0) return false;

  std::filesystem::remove_all(data_dir);
  double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "1000 round-trips, 200/200 corruptions rejected, pipeline in " << elapsed << " s";
  note = os.str();
  return elapsed < 10.0;
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](int index, const char* title, auto&& fn) {
    std::string note;
    bool ok = false;
    try {
      if constexpr (std::is_invocable_v<decltype(fn), std::string&>) ok = fn(note);
      else ok = fn();
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << index << ": " << title;
    if (!note.empty()) std::cout << " [" << note << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
  };

  run(1, "rack power arithmetic (5.6 / 44.8 / 47.04 kW)", criterion_rack_power);
  run(2, "heat output (47 kW -> 160.364 kBTU/h, 13.36 tons)", criterion_heat);
  run(3, "airflow (5 kW -> 500 CFM, 47 kW -> 4700 CFM)", criterion_airflow);
  run(4, "hall aggregate (1600 x 47 kW -> 75.2 / 82.72 MW)", criterion_hall);
  run(5, "case-study hall: PUE band, exact CUE2, 10k ticks under 10 s", criterion_case_study);
  run(6, "pump failure: attribution, conservation, anticipatory margin", criterion_pump_failure);
  run(7, "1000 randomized protocol sequences: atomicity and replay", criterion_fuzz_udcp);
  run(8, "200 random graphs: parallel engines equal brute force", criterion_query_equivalence);
  run(9, "100k-node pattern match: median latency under 200 ms", criterion_query_latency);
  run(10, "end-to-end pipeline and grammar round-trip", criterion_end_to_end);

  if (failures) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
