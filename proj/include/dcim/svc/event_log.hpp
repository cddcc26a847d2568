#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace dcim::svc {

std::uint64_t fnv1a64(const std::string& bytes);

struct LogEntry {
  std::uint64_t seq = 0;
  std::int64_t ts = 0;
  std::string type;  // udcp | state | anomaly | snapshot
  nlohmann::json payload;
  std::string checksum;  // fnv1a64 of the canonical payload bytes, hex
};

struct ReplayResult {
  std::vector<LogEntry> entries;  // valid prefix
  bool truncated = false;
  std::uint64_t last_valid_seq = 0;
  std::string error;  // set when truncated
};

/// Append-only JSONL event log; one canonical document per line with a
/// trailing checksum field. The log is the source of truth: replaying it
/// onto an empty store reproduces the live store.
class EventLog {
 public:
  explicit EventLog(std::string path);

  std::uint64_t append(const std::string& type, nlohmann::json payload, std::int64_t ts);

  // Reads and verifies; stops at the first corrupt entry.
  ReplayResult read_all() const;
  std::vector<LogEntry> read_since(std::uint64_t seq) const;

  void truncate();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mutex_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace dcim::svc
