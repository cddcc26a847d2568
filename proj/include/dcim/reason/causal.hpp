#pragma once

#include <vector>

#include "dcim/reason/rules.hpp"

namespace dcim::reason {

struct CausalCandidate {
  NodeId node_id;
  std::string kind;  // incipient-bearing-failure for a pump with abnormal vibration
  int violated_attrs = 0;
  int depth = 0;
  Explanation explanation;
};

// Candidate causes for an anomaly: nodes reachable from the subject via
// COOLED_BY / POWERED_BY / CONNECTED_TO within depth 3 whose state
// attributes fall outside their declared <attr>_min / <attr>_max normal
// ranges, ranked by (violation count desc, proximity asc, node_id).
std::vector<CausalCandidate> infer_causal(const GraphView& view, const Anomaly& anomaly);

nlohmann::json causal_to_json(const std::vector<CausalCandidate>& candidates);

}  // namespace dcim::reason
