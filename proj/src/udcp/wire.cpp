#include "dcim/udcp/wire.hpp"

#include <algorithm>
#include <set>

namespace dcim::udcp {

const char* to_string(View v) { return v == View::Front ? "front" : "rear"; }
const char* to_string(Path p) { return p == Path::A ? "A" : "B"; }

const char* to_string(MediaKind k) {
  switch (k) {
    case MediaKind::Network: return "network";
    case MediaKind::Power: return "power";
    case MediaKind::Control: return "control";
  }
  return "?";
}

const char* to_string(Command c) {
  switch (c) {
    case Command::Create: return "create";
    case Command::Retrieve: return "retrieve";
    case Command::Update: return "update";
    case Command::Delete: return "delete";
  }
  return "?";
}

std::string endpoint_key(const PortEndpoint& e) {
  return e.device_id + "/RU" + std::to_string(e.elevation_ru) + "/" +
         to_string(e.view) + "/" + to_string(e.path) + "/P" + std::to_string(e.port);
}

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end())
    throw WireError("missing required field", path + "." + key, "field is required");
  return *it;
}

std::string get_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string())
    throw WireError("malformed document", path + "." + key, "expected string");
  return v.get<std::string>();
}

int get_positive_int(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer() || v.get<int>() < 1)
    throw WireError("malformed document", path + "." + key, "expected positive integer");
  return v.get<int>();
}

View parse_view(const json& j, const std::string& path) {
  std::string s = get_string(j, "view", path);
  if (s == "front") return View::Front;
  if (s == "rear") return View::Rear;
  throw WireError("malformed document", path + ".view", "expected front|rear, got '" + s + "'");
}

PortEndpoint parse_endpoint(const json& j, const std::string& path) {
  if (!j.is_object()) throw WireError("malformed document", path, "expected object");
  PortEndpoint e;
  e.device_id = get_string(j, "device_id", path);
  e.elevation_ru = get_positive_int(j, "elevation_ru", path);
  e.view = parse_view(j, path);
  std::string p = get_string(j, "path", path);
  if (p == "A") e.path = Path::A;
  else if (p == "B") e.path = Path::B;
  else throw WireError("malformed document", path + ".path", "expected A|B, got '" + p + "'");
  e.port = get_positive_int(j, "port", path);
  return e;
}

MediaSpec parse_media(const json& j, const std::string& path) {
  if (!j.is_object()) throw WireError("malformed document", path, "expected object");
  MediaSpec m;
  std::string kind = get_string(j, "kind", path);
  if (kind == "network") m.kind = MediaKind::Network;
  else if (kind == "power") m.kind = MediaKind::Power;
  else if (kind == "control") m.kind = MediaKind::Control;
  else throw WireError("malformed document", path + ".kind", "expected network|power|control");
  if (j.contains("fiber_count")) {
    if (m.kind != MediaKind::Network)
      throw WireError("malformed document", path + ".fiber_count", "only valid for kind=network");
    m.fiber_count = get_positive_int(j, "fiber_count", path);
  }
  if (j.contains("connector")) {
    if (m.kind != MediaKind::Network)
      throw WireError("malformed document", path + ".connector", "only valid for kind=network");
    m.connector = get_string(j, "connector", path);
  }
  if (j.contains("cable_type")) m.cable_type = get_string(j, "cable_type", path);
  if (j.contains("length_m")) {
    double v = j.at("length_m").get<double>();
    if (v < 0) throw WireError("malformed document", path + ".length_m", "must be >= 0");
    m.length_m = v;
  }
  if (j.contains("bandwidth_gbps")) {
    double v = j.at("bandwidth_gbps").get<double>();
    if (v < 0) throw WireError("malformed document", path + ".bandwidth_gbps", "must be >= 0");
    m.bandwidth_gbps = v;
  }
  return m;
}

json strip_known(json j, std::initializer_list<const char*> known) {
  for (const char* k : known) j.erase(k);
  return j;
}

DeviceRecord parse_device(const json& j, const std::string& path) {
  if (!j.is_object()) throw WireError("malformed document", path, "expected object");
  DeviceRecord d;
  d.device_id = get_string(j, "device_id", path);
  if (d.device_id.empty())
    throw WireError("malformed document", path + ".device_id", "must be non-empty");
  d.device_type = get_string(j, "device_type", path);
  if (j.contains("location")) {
    const json& loc = j.at("location");
    if (!loc.is_object()) throw WireError("malformed document", path + ".location", "expected object");
    d.location.hall = loc.value("hall", "");
    d.location.row = loc.value("row", "");
    d.location.position = loc.value("position", "");
  }
  if (j.contains("panels")) {
    const json& panels = j.at("panels");
    if (!panels.is_array()) throw WireError("malformed document", path + ".panels", "expected array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      std::string ppath = path + ".panels[" + std::to_string(i) + "]";
      const json& pj = panels[i];
      PanelRecord p;
      p.panel_id = get_string(pj, "panel_id", ppath);
      p.elevation_ru = get_positive_int(pj, "elevation_ru", ppath);
      p.view = parse_view(pj, ppath);
      p.port_count = get_positive_int(pj, "port_count", ppath);
      p.port_type = pj.value("port_type", "");
      if (!seen.insert(p.panel_id).second)
        throw WireError("malformed document", ppath + ".panel_id",
                        "duplicate panel_id '" + p.panel_id + "'");
      d.panels.push_back(std::move(p));
    }
  }
  d.extra = strip_known(j, {"device_id", "device_type", "location", "panels"});
  return d;
}

ConnectionRecord parse_connection(const json& j, const std::string& path) {
  if (!j.is_object()) throw WireError("malformed document", path, "expected object");
  ConnectionRecord c;
  c.a = parse_endpoint(require(j, "a", path), path + ".a");
  c.b = parse_endpoint(require(j, "b", path), path + ".b");
  c.media = parse_media(require(j, "media", path), path + ".media");
  if (j.contains("label")) c.label = get_string(j, "label", path);
  c.extra = strip_known(j, {"a", "b", "media", "label"});
  return c;
}

json endpoint_to_json(const PortEndpoint& e) {
  return json{{"device_id", e.device_id},
              {"elevation_ru", e.elevation_ru},
              {"view", to_string(e.view)},
              {"path", to_string(e.path)},
              {"port", e.port}};
}

json media_to_json(const MediaSpec& m) {
  json j{{"kind", to_string(m.kind)}};
  if (m.fiber_count) j["fiber_count"] = *m.fiber_count;
  if (m.connector) j["connector"] = *m.connector;
  if (m.cable_type) j["cable_type"] = *m.cable_type;
  if (m.length_m) j["length_m"] = *m.length_m;
  if (m.bandwidth_gbps) j["bandwidth_gbps"] = *m.bandwidth_gbps;
  return j;
}

json device_to_json(const DeviceRecord& d) {
  json j = d.extra.is_object() ? d.extra : json::object();
  j["device_id"] = d.device_id;
  j["device_type"] = d.device_type;
  j["location"] = json{{"hall", d.location.hall},
                       {"row", d.location.row},
                       {"position", d.location.position}};
  json panels = json::array();
  std::vector<PanelRecord> sorted = d.panels;
  std::sort(sorted.begin(), sorted.end(),
            [](const PanelRecord& x, const PanelRecord& y) { return x.panel_id < y.panel_id; });
  for (const PanelRecord& p : sorted) {
    panels.push_back(json{{"panel_id", p.panel_id},
                          {"elevation_ru", p.elevation_ru},
                          {"view", to_string(p.view)},
                          {"port_count", p.port_count},
                          {"port_type", p.port_type}});
  }
  j["panels"] = std::move(panels);
  return j;
}

json connection_to_json(const ConnectionRecord& c) {
  json j = c.extra.is_object() ? c.extra : json::object();
  j["a"] = endpoint_to_json(c.a);
  j["b"] = endpoint_to_json(c.b);
  j["media"] = media_to_json(c.media);
  if (c.label) j["label"] = *c.label;
  return j;
}

}  // namespace

UdcpMessage message_from_json(const json& j) {
  if (!j.is_object()) throw WireError("malformed document", "$", "top level must be an object");
  UdcpMessage m;
  std::string cmd = get_string(j, "command", "$");
  if (cmd == "create") m.command = Command::Create;
  else if (cmd == "retrieve") m.command = Command::Retrieve;
  else if (cmd == "update") m.command = Command::Update;
  else if (cmd == "delete") m.command = Command::Delete;
  else throw WireError("unknown command", "$.command", "'" + cmd + "'");
  m.transaction_id = get_string(j, "transaction_id", "$");

  if (j.contains("devices")) {
    const json& devs = j.at("devices");
    if (!devs.is_array()) throw WireError("malformed document", "$.devices", "expected array");
    for (std::size_t i = 0; i < devs.size(); ++i)
      m.devices.push_back(parse_device(devs[i], "$.devices[" + std::to_string(i) + "]"));
  }
  if (j.contains("connections")) {
    const json& conns = j.at("connections");
    if (!conns.is_array()) throw WireError("malformed document", "$.connections", "expected array");
    for (std::size_t i = 0; i < conns.size(); ++i)
      m.connections.push_back(parse_connection(conns[i], "$.connections[" + std::to_string(i) + "]"));
  }
  if (j.contains("filter")) {
    const json& f = j.at("filter");
    if (!f.is_object()) throw WireError("malformed document", "$.filter", "expected object");
    Filter flt;
    if (f.contains("device_id")) flt.device_id = get_string(f, "device_id", "$.filter");
    if (f.contains("hall")) flt.hall = get_string(f, "hall", "$.filter");
    m.filter = flt;
  }
  if (m.command == Command::Retrieve) {
    if (!m.devices.empty() || !m.connections.empty())
      throw WireError("malformed document", "$", "retrieve must not carry a mutation payload");
    if (!m.filter) m.filter = Filter{};  // empty filter = whole store
  }
  m.extra = strip_known(j, {"command", "transaction_id", "devices", "connections", "filter"});
  return m;
}

UdcpMessage parse_message(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw WireError("malformed document", "$", "not valid JSON");
  return message_from_json(j);
}

json message_to_json(const UdcpMessage& msg) {
  json j = msg.extra.is_object() ? msg.extra : json::object();
  j["command"] = to_string(msg.command);
  j["transaction_id"] = msg.transaction_id;

  std::vector<DeviceRecord> devices = msg.devices;
  std::sort(devices.begin(), devices.end(),
            [](const DeviceRecord& x, const DeviceRecord& y) { return x.device_id < y.device_id; });
  json devs = json::array();
  for (const DeviceRecord& d : devices) devs.push_back(device_to_json(d));
  if (!devs.empty() || msg.command != Command::Retrieve) j["devices"] = std::move(devs);

  std::vector<ConnectionRecord> conns = msg.connections;
  auto sorted_keys = [](const ConnectionRecord& c) {
    std::pair<std::string, std::string> k{endpoint_key(c.a), endpoint_key(c.b)};
    if (k.second < k.first) std::swap(k.first, k.second);
    return k;
  };
  std::sort(conns.begin(), conns.end(),
            [&](const ConnectionRecord& x, const ConnectionRecord& y) {
              return sorted_keys(x) < sorted_keys(y);
            });
  json cj = json::array();
  for (const ConnectionRecord& c : conns) cj.push_back(connection_to_json(c));
  if (!cj.empty() || msg.command != Command::Retrieve) j["connections"] = std::move(cj);

  if (msg.filter) {
    json f = json::object();
    if (msg.filter->device_id) f["device_id"] = *msg.filter->device_id;
    if (msg.filter->hall) f["hall"] = *msg.filter->hall;
    j["filter"] = std::move(f);
  }
  return j;
}

std::string serialize_canonical(const UdcpMessage& msg) {
  // nlohmann::json's default object keeps keys ordered lexicographically.
  return message_to_json(msg).dump();
}

json result_to_json(const UdcpResult& r) {
  json deltas = json::array();
  for (const Delta& d : r.deltas) {
    json e;
    e["action"] = d.action == DeltaAction::Created   ? "created"
                  : d.action == DeltaAction::Updated ? "updated"
                                                     : "deleted";
    if (d.kind == Delta::Kind::Device) {
      e["type"] = "device";
      e["device_id"] = d.device->device_id;
    } else {
      e["type"] = "connection";
      e["a"] = endpoint_key(d.connection->a);
      e["b"] = endpoint_key(d.connection->b);
    }
    deltas.push_back(std::move(e));
  }
  json errors = json::array();
  for (const Violation& v : r.errors)
    errors.push_back(json{{"code", v.code}, {"path", v.path}, {"detail", v.detail}});
  return json{{"transaction_id", r.transaction_id},
              {"status", r.status == Status::Applied ? "applied" : "rejected"},
              {"deltas", std::move(deltas)},
              {"errors", std::move(errors)}};
}

}  // namespace dcim::udcp
