#pragma once

#include <stdexcept>
#include <string>

#include "dcim/udcp/types.hpp"

namespace dcim::udcp {

/// Raised by parse_message; `element_path` points at the offending field.
class WireError : public std::runtime_error {
 public:
  WireError(std::string code, std::string element_path, const std::string& detail)
      : std::runtime_error(code + " at " + element_path + ": " + detail),
        code_(std::move(code)),
        path_(std::move(element_path)) {}

  const std::string& code() const { return code_; }
  const std::string& path() const { return path_; }

 private:
  std::string code_;
  std::string path_;
};

UdcpMessage parse_message(const std::string& text);
UdcpMessage message_from_json(const nlohmann::json& j);

// Deterministic byte output: keys sorted lexicographically, devices sorted
// by device_id, connections by (a, b) endpoint key. parse(serialize(m))
// structurally equals m.
std::string serialize_canonical(const UdcpMessage& msg);
nlohmann::json message_to_json(const UdcpMessage& msg);

}  // namespace dcim::udcp
