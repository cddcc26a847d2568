#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcim::udcp {

enum class View { Front, Rear };
enum class Path { A, B };
enum class MediaKind { Network, Power, Control };
enum class Command { Create, Retrieve, Update, Delete };
enum class Status { Applied, Rejected };

const char* to_string(View v);
const char* to_string(Path p);
const char* to_string(MediaKind k);
const char* to_string(Command c);

/// Globally unique physical port coordinate.
struct PortEndpoint {
  std::string device_id;
  int elevation_ru = 1;
  View view = View::Front;
  Path path = Path::A;
  int port = 1;

  auto operator<=>(const PortEndpoint&) const = default;
};

// Canonical identifier: "device_id/RU<elevation>/<view>/<path>/P<port>".
// Injective over valid endpoints and stable across runs.
std::string endpoint_key(const PortEndpoint& e);

struct MediaSpec {
  MediaKind kind = MediaKind::Network;
  std::optional<int> fiber_count;
  std::optional<std::string> connector;
  std::optional<std::string> cable_type;
  std::optional<double> length_m;
  std::optional<double> bandwidth_gbps;

  bool operator==(const MediaSpec&) const = default;
};

struct PanelRecord {
  std::string panel_id;
  int elevation_ru = 1;
  View view = View::Front;
  int port_count = 1;
  std::string port_type;

  bool operator==(const PanelRecord&) const = default;
};

struct Location {
  std::string hall;
  std::string row;
  std::string position;

  bool operator==(const Location&) const = default;
};

struct DeviceRecord {
  std::string device_id;
  std::string device_type;
  Location location;
  std::vector<PanelRecord> panels;
  nlohmann::json extra = nlohmann::json::object();  // unknown fields, kept for round-trip

  bool operator==(const DeviceRecord&) const = default;
};

struct ConnectionRecord {
  PortEndpoint a;
  PortEndpoint b;
  MediaSpec media;
  std::optional<std::string> label;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const ConnectionRecord&) const = default;
};

struct Filter {
  std::optional<std::string> device_id;
  std::optional<std::string> hall;

  bool empty() const { return !device_id && !hall; }
  bool operator==(const Filter&) const = default;
};

/// One stateless protocol transaction; self-contained by construction.
struct UdcpMessage {
  Command command = Command::Create;
  std::string transaction_id;
  std::vector<DeviceRecord> devices;
  std::vector<ConnectionRecord> connections;
  std::optional<Filter> filter;
  nlohmann::json extra = nlohmann::json::object();

  bool operator==(const UdcpMessage&) const = default;
};

struct Violation {
  std::string code;  // unresolved endpoint, endpoint occupied, duplicate endpoint, ...
  std::string path;  // element path within the message, e.g. connections[3].a
  std::string detail;
};

enum class DeltaAction { Created, Updated, Deleted };

struct Delta {
  DeltaAction action = DeltaAction::Created;
  enum class Kind { Device, Connection } kind = Kind::Device;
  // Payload of the affected record; for deletions, the record as it was.
  std::optional<DeviceRecord> device;
  std::optional<ConnectionRecord> connection;
};

struct UdcpResult {
  std::string transaction_id;
  Status status = Status::Rejected;
  std::vector<Delta> deltas;
  std::vector<Violation> errors;
};

nlohmann::json result_to_json(const UdcpResult& r);

}  // namespace dcim::udcp
