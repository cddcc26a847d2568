#pragma once

#include <map>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "dcim/udcp/types.hpp"

namespace dcim::udcp {

/// As-built connectivity record. Apply is serialized through an internal
/// lock; reads observe the last committed state.
class ConnectivityStore {
 public:
  using PairKey = std::pair<std::string, std::string>;  // sorted endpoint keys

  std::vector<Violation> validate_message(const UdcpMessage& msg) const;
  UdcpResult apply_message(const UdcpMessage& msg);

  // Create-shaped message that, applied to an empty store, reproduces the
  // filtered sub-store exactly. Throws std::invalid_argument for an unknown
  // device_id in the filter.
  UdcpMessage retrieve_asbuilt(const Filter& filter) const;

  std::size_t device_count() const;
  std::size_t connection_count() const;

  bool operator==(const ConnectivityStore& other) const;

  static PairKey pair_key(const PortEndpoint& a, const PortEndpoint& b);

 private:
  std::vector<Violation> validate_locked(const UdcpMessage& msg) const;

  // Panel lookup for an endpoint, consulting in-message devices first.
  const DeviceRecord* resolve_device(const UdcpMessage& msg, const std::string& device_id) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, DeviceRecord> devices_;
  std::map<PairKey, ConnectionRecord> connections_;
  std::map<std::string, PairKey> occupancy_;  // endpoint key -> owning connection
};

}  // namespace dcim::udcp
