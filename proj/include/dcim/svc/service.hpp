#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "dcim/energy/control.hpp"
#include "dcim/graph/graph.hpp"
#include "dcim/svc/event_log.hpp"
#include "dcim/udcp/store.hpp"

namespace httplib {
class Server;
}

namespace dcim::svc {

struct ServiceOptions {
  std::string data_dir = "data";
  std::string scenario_dir = "scenarios";
  energy::EnergyConfig energy;
  double carbon_kg_per_kwh = 0.36;
};

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

/// Front door shared by the HTTP server and the batch CLI. Mutations
/// serialize through one lock and land in the event log before they are
/// visible; reads serve from the latest committed graph view.
class Service {
 public:
  explicit Service(ServiceOptions options);

  // Rebuild live state from the event log; returns the replay outcome.
  ReplayResult replay();

  HttpResponse handle_udcp(const std::string& body);
  HttpResponse handle_query(const std::string& body);
  HttpResponse handle_intent(const std::string& body);
  HttpResponse handle_metrics();
  HttpResponse handle_events(std::uint64_t since);
  HttpResponse handle_simulate(const std::string& body);

  nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snapshot_doc);

  void attach_routes(httplib::Server& server);

  const udcp::ConnectivityStore& store() const { return *store_; }
  graph::GraphStore& graph_store() { return *graph_; }
  EventLog& log() { return log_; }

 private:
  void apply_entry(const LogEntry& entry);

  ServiceOptions options_;
  EventLog log_;
  std::mutex write_mutex_;
  std::unique_ptr<udcp::ConnectivityStore> store_;
  std::unique_ptr<graph::GraphStore> graph_;
  std::int64_t clock_ = 0;  // logical timestamp for logged mutations
};

}  // namespace dcim::svc
