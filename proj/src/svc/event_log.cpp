#include "dcim/svc/event_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcim::svc {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string checksum_of(const nlohmann::json& payload) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(payload.dump())));
  return buf;
}

}  // namespace

EventLog::EventLog(std::string path) : path_(std::move(path)) {
  ReplayResult existing = read_all();
  if (!existing.entries.empty()) next_seq_ = existing.entries.back().seq + 1;
}

std::uint64_t EventLog::append(const std::string& type, nlohmann::json payload, std::int64_t ts) {
  std::lock_guard lock(mutex_);
  std::uint64_t seq = next_seq_++;
  nlohmann::json line{{"seq", seq},
                      {"ts", ts},
                      {"type", type},
                      {"payload", payload},
                      {"checksum", checksum_of(payload)}};
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot open event log for append: " + path_);
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("event log write failed: " + path_);
  return seq;
}

ReplayResult EventLog::read_all() const {
  std::lock_guard lock(mutex_);
  ReplayResult result;
  std::ifstream in(path_);
  if (!in) return result;  // no log yet
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("seq") || !j.contains("payload") ||
        !j.contains("checksum")) {
      result.truncated = true;
      result.error = "unparseable entry at line " + std::to_string(line_no);
      break;
    }
    LogEntry e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.ts = j.value("ts", std::int64_t{0});
    e.type = j.value("type", "");
    e.payload = j.at("payload");
    e.checksum = j.at("checksum").get<std::string>();
    if (e.checksum != checksum_of(e.payload)) {
      result.truncated = true;
      result.error = "checksum mismatch at seq " + std::to_string(e.seq) + "; replay halted at " +
                     std::to_string(result.last_valid_seq);
      break;
    }
    result.last_valid_seq = e.seq;
    result.entries.push_back(std::move(e));
  }
  return result;
}

std::vector<LogEntry> EventLog::read_since(std::uint64_t seq) const {
  ReplayResult all = read_all();
  std::vector<LogEntry> out;
  for (auto& e : all.entries)
    if (e.seq > seq) out.push_back(std::move(e));
  return out;
}

void EventLog::truncate() {
  std::lock_guard lock(mutex_);
  std::ofstream out(path_, std::ios::trunc);
  next_seq_ = 1;
}

}  // namespace dcim::svc
