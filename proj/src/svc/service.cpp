#include "dcim/svc/service.hpp"

#include <filesystem>

#include <httplib.h>

#include "dcim/energy/energetics.hpp"
#include "dcim/graph/ingest.hpp"
#include "dcim/graph/pattern.hpp"
#include "dcim/reason/intent.hpp"
#include "dcim/sim/simulator.hpp"
#include "dcim/udcp/wire.hpp"

namespace dcim::svc {

namespace {

nlohmann::json error_body(const std::string& message) {
  return nlohmann::json{{"error", message}};
}

}  // namespace

Service::Service(ServiceOptions options)
    : options_(std::move(options)),
      log_((std::filesystem::create_directories(options_.data_dir),
            (std::filesystem::path(options_.data_dir) / "events.log").string())),
      store_(std::make_unique<udcp::ConnectivityStore>()),
      graph_(std::make_unique<graph::GraphStore>()) {
  replay();
}

void Service::apply_entry(const LogEntry& entry) {
  if (entry.type == "udcp") {
    udcp::UdcpMessage msg = udcp::message_from_json(entry.payload);
    udcp::UdcpResult result = store_->apply_message(msg);
    if (result.status != udcp::Status::Applied)
      throw std::runtime_error("log replay: committed transaction '" + msg.transaction_id +
                               "' no longer applies");
    graph::ingest_udcp(*graph_, result);
  } else if (entry.type == "state") {
    graph::StateUpdate u;
    u.node_id = entry.payload.at("node_id").get<std::string>();
    u.ts = entry.payload.at("ts").get<std::int64_t>();
    for (const auto& [k, v] : entry.payload.at("attrs").items()) u.attrs[k] = scalar_from_json(v);
    graph_->apply_state_update(u);
  } else if (entry.type == "snapshot") {
    store_ = std::make_unique<udcp::ConnectivityStore>();
    graph_ = std::make_unique<graph::GraphStore>();
    udcp::UdcpMessage asbuilt = udcp::message_from_json(entry.payload.at("asbuilt"));
    udcp::UdcpResult result = store_->apply_message(asbuilt);
    if (result.status != udcp::Status::Applied)
      throw std::runtime_error("snapshot restore: as-built message rejected");
    graph::GraphStore::import_snapshot(entry.payload.at("graph"), *graph_);
  }
  // anomaly entries are informational; nothing to apply
}

ReplayResult Service::replay() {
  std::lock_guard lock(write_mutex_);
  store_ = std::make_unique<udcp::ConnectivityStore>();
  graph_ = std::make_unique<graph::GraphStore>();
  ReplayResult result = log_.read_all();
  clock_ = 0;
  for (const LogEntry& e : result.entries) {
    apply_entry(e);
    clock_ = std::max(clock_, e.ts);
  }
  return result;
}

HttpResponse Service::handle_udcp(const std::string& body) {
  udcp::UdcpMessage msg;
  try {
    msg = udcp::parse_message(body);
  } catch (const udcp::WireError& e) {
    return {400, error_body(e.what())};
  }

  if (msg.command == udcp::Command::Retrieve) {
    try {
      udcp::UdcpMessage asbuilt = store_->retrieve_asbuilt(*msg.filter);
      return {200, udcp::message_to_json(asbuilt)};
    } catch (const std::invalid_argument& e) {
      return {400, error_body(e.what())};
    }
  }

  std::lock_guard lock(write_mutex_);
  udcp::UdcpResult result = store_->apply_message(msg);
  if (result.status == udcp::Status::Applied) {
    log_.append("udcp", udcp::message_to_json(msg), ++clock_);
    graph::ingest_udcp(*graph_, result);
    return {200, udcp::result_to_json(result)};
  }
  return {409, udcp::result_to_json(result)};
}

HttpResponse Service::handle_query(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) return {400, error_body("body is not valid JSON")};
  graph::PatternQuery q;
  try {
    q = graph::pattern_from_json(j);
  } catch (const std::exception& e) {
    return {400, error_body(e.what())};
  }
  auto view = graph_->view();
  graph::MatchResult rows = graph::match_pattern(*view, q);
  return {200, nlohmann::json{{"rows", rows.rows},
                              {"warnings", rows.warnings},
                              {"commit", view->commit_seq()}}};
}

HttpResponse Service::handle_intent(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  std::string text;
  if (j.is_object() && j.contains("text")) text = j.at("text").get<std::string>();
  else text = body;

  graph::PatternQuery q;
  try {
    q = reason::compile_intent(text);
  } catch (const reason::IntentError& e) {
    return {400, error_body(e.what())};
  }
  auto view = graph_->view();
  graph::MatchResult rows = graph::match_pattern(*view, q);
  return {200, nlohmann::json{{"query", graph::pattern_to_json(q)},
                              {"rows", rows.rows},
                              {"warnings", rows.warnings}}};
}

HttpResponse Service::handle_metrics() {
  auto view = graph_->view();
  double it_kw = 0.0, pump_kw = 0.0;
  for (const auto& [id, n] : view->nodes()) {
    if (n.label == "Rack") {
      if (auto v = n.attr("power_kw")) {
        if (std::holds_alternative<double>(*v)) it_kw += std::get<double>(*v);
        else if (std::holds_alternative<std::int64_t>(*v)) it_kw += double(std::get<std::int64_t>(*v));
      }
    } else if (n.label == "Pump") {
      if (auto v = n.attr("pump_power_kw")) {
        if (std::holds_alternative<double>(*v)) pump_kw += std::get<double>(*v);
        else if (std::holds_alternative<std::int64_t>(*v)) pump_kw += double(std::get<std::int64_t>(*v));
      }
    }
  }
  if (it_kw <= 0)
    return {200, nlohmann::json{{"pue", 1.0}, {"it_kw", 0.0}, {"note", "no rack telemetry yet"}}};
  double total_kw = it_kw * (1.0 + options_.energy.overhead_frac) + pump_kw;
  energy::EfficiencyReport report = energy::efficiency_report(
      total_kw, it_kw, options_.carbon_kg_per_kwh * it_kw, it_kw, 0.0, 0.0, 0.0);
  report.cue2_kg_per_kwh = options_.carbon_kg_per_kwh;
  nlohmann::json out = energy::efficiency_to_json(report);
  out["it_kw"] = it_kw;
  out["total_kw"] = total_kw;
  return {200, std::move(out)};
}

HttpResponse Service::handle_events(std::uint64_t since) {
  nlohmann::json entries = nlohmann::json::array();
  for (const LogEntry& e : log_.read_since(since))
    entries.push_back({{"seq", e.seq},
                       {"ts", e.ts},
                       {"type", e.type},
                       {"payload", e.payload},
                       {"checksum", e.checksum}});
  return {200, nlohmann::json{{"entries", std::move(entries)}}};
}

HttpResponse Service::handle_simulate(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.contains("scenario"))
    return {400, error_body("expected {\"scenario\": <name>, \"seed\": <optional>}")};
  std::string name = j.at("scenario").get<std::string>();
  std::filesystem::path path = std::filesystem::path(options_.scenario_dir) / (name + ".json");
  if (!std::filesystem::exists(path)) return {404, error_body("unknown scenario '" + name + "'")};
  try {
    sim::Scenario scenario = sim::load_scenario_file(path.string());
    if (j.contains("seed")) scenario.seed = j.at("seed").get<std::uint64_t>();
    sim::SimReport report = sim::run_scenario(scenario);
    return {200, sim::report_to_json(report)};
  } catch (const std::exception& e) {
    return {400, error_body(e.what())};
  }
}

nlohmann::json Service::snapshot() const {
  nlohmann::json asbuilt = udcp::message_to_json(store_->retrieve_asbuilt({}));
  return nlohmann::json{{"asbuilt", std::move(asbuilt)}, {"graph", graph_->export_snapshot()}};
}

void Service::restore(const nlohmann::json& snapshot_doc) {
  {
    std::lock_guard lock(write_mutex_);
    log_.truncate();
    log_.append("snapshot", snapshot_doc, ++clock_);
  }
  replay();
}

void Service::attach_routes(httplib::Server& server) {
  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post("/udcp", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_udcp(req.body));
  });
  server.Post("/query", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_query(req.body));
  });
  server.Post("/intent", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_intent(req.body));
  });
  server.Get("/metrics", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_metrics());
  });
  server.Get("/events", [this, send](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t since = 0;
    if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
    send(res, handle_events(since));
  });
  server.Post("/simulate", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_simulate(req.body));
  });
}

}  // namespace dcim::svc
