#include "dcim/udcp/store.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <stdexcept>

namespace dcim::udcp {

ConnectivityStore::PairKey ConnectivityStore::pair_key(const PortEndpoint& a,
                                                       const PortEndpoint& b) {
  std::string ka = endpoint_key(a), kb = endpoint_key(b);
  if (kb < ka) std::swap(ka, kb);
  return {std::move(ka), std::move(kb)};
}

const DeviceRecord* ConnectivityStore::resolve_device(const UdcpMessage& msg,
                                                      const std::string& device_id) const {
  for (const DeviceRecord& d : msg.devices)
    if (d.device_id == device_id) return &d;
  auto it = devices_.find(device_id);
  return it == devices_.end() ? nullptr : &it->second;
}

namespace {

// A panel hosts the endpoint when elevation and view match and the port
// index is within the panel's port count.
const PanelRecord* find_panel(const DeviceRecord& dev, const PortEndpoint& e) {
  for (const PanelRecord& p : dev.panels)
    if (p.elevation_ru == e.elevation_ru && p.view == e.view) return &p;
  return nullptr;
}

// Panel order in a message is presentation only; store devices in panel_id
// order so equal as-builts compare equal regardless of how they arrived.
DeviceRecord normalized(DeviceRecord d) {
  std::sort(d.panels.begin(), d.panels.end(),
            [](const PanelRecord& x, const PanelRecord& y) { return x.panel_id < y.panel_id; });
  return d;
}

}  // namespace

std::vector<Violation> ConnectivityStore::validate_locked(const UdcpMessage& msg) const {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string path, std::string detail) {
    out.push_back({std::move(code), std::move(path), std::move(detail)});
  };

  const bool is_create = msg.command == Command::Create;
  const bool is_update = msg.command == Command::Update;
  const bool is_delete = msg.command == Command::Delete;
  if (msg.command == Command::Retrieve) return out;

  std::set<std::string> message_devices;
  for (std::size_t i = 0; i < msg.devices.size(); ++i) {
    const DeviceRecord& d = msg.devices[i];
    std::string path = "devices[" + std::to_string(i) + "]";
    if (!message_devices.insert(d.device_id).second)
      add("duplicate device", path, "device '" + d.device_id + "' declared twice in message");
    bool in_store = devices_.count(d.device_id) > 0;
    if (is_create && in_store)
      add("duplicate device", path, "device '" + d.device_id + "' already exists in store");
    if ((is_update || is_delete) && !in_store)
      add("unknown device", path, "device '" + d.device_id + "' not in store");
  }

  // Endpoints to be vacated by this message; a delete frees its ports.
  std::set<std::string> freed;
  if (is_delete || is_update) {
    for (const ConnectionRecord& c : msg.connections) {
      freed.insert(endpoint_key(c.a));
      freed.insert(endpoint_key(c.b));
    }
  }

  std::set<std::string> claimed;  // endpoints claimed within this message
  std::set<PairKey> message_pairs;
  for (std::size_t i = 0; i < msg.connections.size(); ++i) {
    const ConnectionRecord& c = msg.connections[i];
    std::string path = "connections[" + std::to_string(i) + "]";

    if (c.a == c.b) add("self loop", path, "both endpoints identical");

    for (const auto& [ep, side] : {std::pair{&c.a, ".a"}, std::pair{&c.b, ".b"}}) {
      const DeviceRecord* dev = resolve_device(msg, ep->device_id);
      if (!dev) {
        add("unresolved endpoint", path + side,
            "device '" + ep->device_id + "' is not declared");
        continue;
      }
      const PanelRecord* panel = find_panel(*dev, *ep);
      if (!panel) {
        add("unresolved endpoint", path + side,
            "no panel at RU" + std::to_string(ep->elevation_ru) + "/" + to_string(ep->view) +
                " on device '" + ep->device_id + "'");
      } else if (ep->port > panel->port_count) {
        add("port out of range", path + side,
            "port " + std::to_string(ep->port) + " exceeds panel port_count " +
                std::to_string(panel->port_count));
      }
    }

    PairKey pk = pair_key(c.a, c.b);
    bool exists = connections_.count(pk) > 0;
    if (is_create) {
      for (const auto& [ep, side] : {std::pair{&c.a, ".a"}, std::pair{&c.b, ".b"}}) {
        std::string key = endpoint_key(*ep);
        if (!claimed.insert(key).second)
          add("duplicate endpoint", path + side, "endpoint '" + key + "' claimed twice in message");
        if (occupancy_.count(key))
          add("endpoint occupied", path + side, "endpoint '" + key + "' already connected");
      }
    } else if (is_update || is_delete) {
      if (!exists)
        add("unknown connection", path,
            "no connection between '" + pk.first + "' and '" + pk.second + "'");
      if (!message_pairs.insert(pk).second)
        add("duplicate endpoint", path, "connection referenced twice in message");
    }
  }

  if (is_delete) {
    // A device can only be deleted once none of its ports remain connected.
    for (std::size_t i = 0; i < msg.devices.size(); ++i) {
      const DeviceRecord& d = msg.devices[i];
      for (const auto& [key, pk] : occupancy_) {
        if (key.rfind(d.device_id + "/", 0) == 0 && !freed.count(key)) {
          add("device has connections", "devices[" + std::to_string(i) + "]",
              "device '" + d.device_id + "' still owns endpoint '" + key + "'");
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Violation> ConnectivityStore::validate_message(const UdcpMessage& msg) const {
  std::shared_lock lock(mutex_);
  return validate_locked(msg);
}

UdcpResult ConnectivityStore::apply_message(const UdcpMessage& msg) {
  std::unique_lock lock(mutex_);
  UdcpResult result;
  result.transaction_id = msg.transaction_id;
  result.errors = validate_locked(msg);
  if (!result.errors.empty()) {
    result.status = Status::Rejected;
    return result;
  }
  result.status = Status::Applied;

  switch (msg.command) {
    case Command::Retrieve:
      return result;  // reads go through retrieve_asbuilt
    case Command::Create: {
      for (const DeviceRecord& d : msg.devices) {
        devices_[d.device_id] = normalized(d);
        result.deltas.push_back({DeltaAction::Created, Delta::Kind::Device, d, std::nullopt});
      }
      for (const ConnectionRecord& c : msg.connections) {
        PairKey pk = pair_key(c.a, c.b);
        occupancy_[endpoint_key(c.a)] = pk;
        occupancy_[endpoint_key(c.b)] = pk;
        connections_[pk] = c;
        result.deltas.push_back({DeltaAction::Created, Delta::Kind::Connection, std::nullopt, c});
      }
      break;
    }
    case Command::Update: {
      for (const DeviceRecord& d : msg.devices) {
        devices_[d.device_id] = normalized(d);
        result.deltas.push_back({DeltaAction::Updated, Delta::Kind::Device, d, std::nullopt});
      }
      for (const ConnectionRecord& c : msg.connections) {
        ConnectionRecord& stored = connections_.at(pair_key(c.a, c.b));
        stored.media = c.media;
        stored.label = c.label;
        result.deltas.push_back({DeltaAction::Updated, Delta::Kind::Connection, std::nullopt, stored});
      }
      break;
    }
    case Command::Delete: {
      for (const ConnectionRecord& c : msg.connections) {
        PairKey pk = pair_key(c.a, c.b);
        ConnectionRecord stored = connections_.at(pk);
        occupancy_.erase(endpoint_key(stored.a));
        occupancy_.erase(endpoint_key(stored.b));
        connections_.erase(pk);
        result.deltas.push_back({DeltaAction::Deleted, Delta::Kind::Connection, std::nullopt, stored});
      }
      for (const DeviceRecord& d : msg.devices) {
        DeviceRecord stored = devices_.at(d.device_id);
        devices_.erase(d.device_id);
        result.deltas.push_back({DeltaAction::Deleted, Delta::Kind::Device, stored, std::nullopt});
      }
      break;
    }
  }
  return result;
}

UdcpMessage ConnectivityStore::retrieve_asbuilt(const Filter& filter) const {
  std::shared_lock lock(mutex_);
  if (filter.device_id && !devices_.count(*filter.device_id))
    throw std::invalid_argument("unknown device_id in filter: '" + *filter.device_id + "'");

  std::set<std::string> selected;
  for (const auto& [id, dev] : devices_) {
    if (filter.device_id && id != *filter.device_id) continue;
    if (filter.hall && dev.location.hall != *filter.hall) continue;
    selected.insert(id);
  }

  // For a device_id filter, pull in peers so the result is self-contained.
  if (filter.device_id) {
    for (const auto& [pk, c] : connections_) {
      if (selected.count(c.a.device_id) || selected.count(c.b.device_id)) {
        if (!filter.hall || devices_.at(c.a.device_id).location.hall == *filter.hall)
          selected.insert(c.a.device_id);
        if (!filter.hall || devices_.at(c.b.device_id).location.hall == *filter.hall)
          selected.insert(c.b.device_id);
      }
    }
  }

  UdcpMessage out;
  out.command = Command::Create;
  out.transaction_id = "asbuilt";
  for (const std::string& id : selected) out.devices.push_back(devices_.at(id));
  for (const auto& [pk, c] : connections_)
    if (selected.count(c.a.device_id) && selected.count(c.b.device_id))
      out.connections.push_back(c);
  return out;
}

std::size_t ConnectivityStore::device_count() const {
  std::shared_lock lock(mutex_);
  return devices_.size();
}

std::size_t ConnectivityStore::connection_count() const {
  std::shared_lock lock(mutex_);
  return connections_.size();
}

bool ConnectivityStore::operator==(const ConnectivityStore& other) const {
  std::shared_lock l1(mutex_, std::defer_lock);
  std::shared_lock l2(other.mutex_, std::defer_lock);
  if (this == &other) return true;
  std::lock(l1, l2);
  return devices_ == other.devices_ && connections_ == other.connections_;
}

}  // namespace dcim::udcp
