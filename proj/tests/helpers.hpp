#pragma once

// Shared fixtures for the test suites: canonical UDCP documents, small
// graph fixtures, and random generators used by the property tests.

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcim/graph/graph.hpp"
#include "dcim/udcp/types.hpp"

namespace testutil {

using nlohmann::json;

inline json endpoint(const std::string& dev, int ru, const std::string& view,
                     const std::string& path, int port) {
  return json{{"device_id", dev}, {"elevation_ru", ru}, {"view", view},
              {"path", path},     {"port", port}};
}

inline json device(const std::string& id, const std::string& type, const std::string& hall,
                   std::vector<json> panels) {
  return json{{"device_id", id},
              {"device_type", type},
              {"location", {{"hall", hall}, {"row", "r1"}, {"position", "p1"}}},
              {"panels", std::move(panels)}};
}

inline json panel(const std::string& id, int ru, const std::string& view, int ports,
                  const std::string& type = "MPO-12") {
  return json{{"panel_id", id}, {"elevation_ru", ru}, {"view", view},
              {"port_count", ports}, {"port_type", type}};
}

// The Rack A build: Rack A RU20 Path A connects to Spine 2 RU10 Path A
// over a 12-fiber MPO trunk.
inline json rack_a_build(const std::string& txn = "t-rack-a") {
  return json{
      {"command", "create"},
      {"transaction_id", txn},
      {"devices",
       {device("RackA", "Rack", "1", {panel("net", 20, "front", 12)}),
        device("Spine2", "Switch", "1", {panel("net", 10, "front", 12)})}},
      {"connections",
       {{{"a", endpoint("RackA", 20, "front", "A", 1)},
         {"b", endpoint("Spine2", 10, "front", "A", 1)},
         {"media",
          {{"kind", "network"}, {"fiber_count", 12}, {"connector", "MPO-12"},
           {"cable_type", "Type B"}, {"length_m", 30.0}, {"bandwidth_gbps", 100.0}}},
         {"label", "Path A"}}}}};
}

// Two-hall build with redundant and non-redundant power feeds; used by the
// retrieve filter tests and the R12 fixture queries.
inline json two_hall_build() {
  json devices = json::array();
  devices.push_back(device("PDU-A", "PDU", "1", {panel("out", 1, "front", 48, "C20")}));
  devices.push_back(device("PDU-B", "PDU", "1", {panel("out", 1, "front", 48, "C20")}));
  devices.push_back(device("PDU-C", "PDU", "2", {panel("out", 1, "front", 48, "C20")}));
  devices.push_back(device("R11", "Rack", "1",
                           {panel("pwr", 42, "rear", 4, "C19"), panel("net", 20, "front", 12)}));
  devices.push_back(device("R12", "Rack", "1",
                           {panel("pwr", 42, "rear", 4, "C19"), panel("net", 20, "front", 12)}));
  devices.push_back(device("R21", "Rack", "2",
                           {panel("pwr", 42, "rear", 4, "C19"), panel("net", 20, "front", 12)}));
  devices.push_back(device("Spine1", "Switch", "1", {panel("net", 10, "front", 12)}));

  json connections = json::array();
  auto power = [&](const std::string& rack, const std::string& path, int rack_port,
                   const std::string& pdu, int pdu_port) {
    connections.push_back({{"a", endpoint(rack, 42, "rear", path, rack_port)},
                           {"b", endpoint(pdu, 1, "front", path, pdu_port)},
                           {"media", {{"kind", "power"}}}});
  };
  power("R11", "A", 1, "PDU-A", 1);
  power("R11", "B", 2, "PDU-B", 1);
  power("R12", "A", 1, "PDU-A", 2);
  power("R12", "B", 2, "PDU-B", 2);
  power("R21", "A", 1, "PDU-C", 1);  // single feed: non-redundant
  connections.push_back({{"a", endpoint("R12", 20, "front", "A", 1)},
                         {"b", endpoint("Spine1", 10, "front", "A", 1)},
                         {"media",
                          {{"kind", "network"}, {"fiber_count", 12},
                           {"bandwidth_gbps", 40.0}}}});
  return json{{"command", "create"},
              {"transaction_id", "t-two-hall"},
              {"devices", std::move(devices)},
              {"connections", std::move(connections)}};
}

// Six-node graph fixture for the analytic query: racks exceeding 40 kW that
// are under-connected (some CONNECTED_TO edge with bandwidth below 100).
inline void build_r12_fixture(dcim::graph::GraphStore& g) {
  using namespace dcim::graph;
  auto add = [&](const std::string& id, const std::string& label,
                 std::map<std::string, dcim::Scalar> attrs) {
    Node n;
    n.node_id = id;
    n.label = label;
    n.structural_attrs = std::move(attrs);
    g.upsert_node(n);
  };
  add("R11", "Rack", {{"power_kw", 12.0}, {"temp_f", 75.0}});
  add("R12", "Rack", {{"power_kw", 47.0}, {"temp_f", 88.0}});
  add("R13", "Rack", {{"power_kw", 44.0}});
  add("SW1", "Switch", {});
  add("PDU-A", "PDU", {});
  add("Hall-2", "Hall", {{"name", std::string("2")}});
  g.upsert_edge({"R12-SW1", EdgeKind::ConnectedTo, "R12", "SW1", {{"bandwidth_gbps", 40.0}}});
  g.upsert_edge({"R13-SW1", EdgeKind::ConnectedTo, "R13", "SW1", {{"bandwidth_gbps", 400.0}}});
  g.upsert_edge({"R12-PDU", EdgeKind::PoweredBy, "R12", "PDU-A", {}});
  g.upsert_edge({"R12-H2", EdgeKind::LocatedIn, "R12", "Hall-2", {}});
  g.upsert_edge({"R11-H2", EdgeKind::LocatedIn, "R11", "Hall-2", {}});
}

// Random small graph over a fixed label/attribute vocabulary; used by the
// oracle-equivalence property tests.
inline void random_graph(dcim::graph::GraphStore& g, std::mt19937_64& rng, int max_nodes = 50) {
  using namespace dcim::graph;
  std::uniform_int_distribution<int> n_nodes(1, max_nodes);
  std::uniform_real_distribution<double> power(5.0, 60.0);
  std::uniform_real_distribution<double> bw(1.0, 400.0);
  std::uniform_int_distribution<int> label_pick(0, 3);
  const char* labels[] = {"Rack", "Switch", "PDU", "Pump"};

  int n = n_nodes(rng);
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    std::string id = "N" + std::to_string(i);
    Node node;
    node.node_id = id;
    node.label = labels[label_pick(rng)];
    if (rng() % 2) node.structural_attrs["power_kw"] = power(rng);
    if (rng() % 3 == 0) node.structural_attrs["zone"] = std::string(rng() % 2 ? "a" : "b");
    g.upsert_node(node);
    if (rng() % 2) {
      g.apply_state_update({id, {{"temp_c", power(rng) + 40.0},
                                 {"fan_speed", double(int(rng() % 101))}}, 1});
    }
    ids.push_back(std::move(id));
  }
  int n_edges = int(rng() % (2 * n + 1));
  for (int i = 0; i < n_edges; ++i) {
    const std::string& a = ids[rng() % ids.size()];
    const std::string& b = ids[rng() % ids.size()];
    EdgeKind kind = rng() % 2 ? EdgeKind::ConnectedTo : EdgeKind::PoweredBy;
    Edge e{"E" + std::to_string(i), kind, a, b, {}};
    if (rng() % 2) e.attrs["bandwidth_gbps"] = bw(rng);
    g.upsert_edge(e);
  }
}

// Fresh scratch directory under the system temp dir.
inline std::string temp_dir(const std::string& tag) {
  auto base = std::filesystem::temp_directory_path() /
              ("dcim-test-" + tag + "-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(base);
  return base.string();
}

inline std::string scenario_dir() { return DCIM_SCENARIO_DIR; }

}  // namespace testutil
