#include "dcim/reason/causal.hpp"

#include <algorithm>

namespace dcim::reason {

namespace {

using graph::Direction;
using graph::EdgeKind;
using graph::Node;

// State attrs outside the node's declared normal range become evidence.
std::vector<EvidenceItem> range_violations(const Node& node) {
  std::vector<EvidenceItem> out;
  for (const auto& [name, sv] : node.state_attrs) {
    bool violated = false;
    if (auto lo = node.structural_attrs.find(name + "_min"); lo != node.structural_attrs.end())
      if (compare(sv.value, CmpOp::Lt, lo->second)) violated = true;
    if (auto hi = node.structural_attrs.find(name + "_max"); hi != node.structural_attrs.end())
      if (compare(sv.value, CmpOp::Gt, hi->second)) violated = true;
    if (violated) out.push_back({node.node_id, name, sv.value});
  }
  return out;
}

}  // namespace

std::vector<CausalCandidate> infer_causal(const GraphView& view, const Anomaly& anomaly) {
  if (!view.find_node(anomaly.subject)) return {};
  graph::Subgraph reach =
      graph::traverse(view, anomaly.subject,
                      {EdgeKind::CooledBy, EdgeKind::PoweredBy, EdgeKind::ConnectedTo}, 1, 3,
                      Direction::Any);

  std::vector<CausalCandidate> candidates;
  for (const auto& [depth, id] : reach.nodes) {
    const Node* node = view.find_node(id);
    std::vector<EvidenceItem> violations = range_violations(*node);
    if (violations.empty()) continue;
    CausalCandidate c;
    c.node_id = id;
    c.violated_attrs = static_cast<int>(violations.size());
    c.depth = depth;
    bool vibration = std::any_of(violations.begin(), violations.end(),
                                 [](const EvidenceItem& e) { return e.attribute == "vibration"; });
    c.kind = (node->label == "Pump" && vibration) ? "incipient-bearing-failure"
                                                  : "out-of-range-state";
    c.explanation.source = "causal-range-scan/" + anomaly.anomaly_id;
    c.explanation.evidence = std::move(violations);
    candidates.push_back(std::move(c));
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const CausalCandidate& a, const CausalCandidate& b) {
              return std::tuple(-a.violated_attrs, a.depth, a.node_id) <
                     std::tuple(-b.violated_attrs, b.depth, b.node_id);
            });
  return candidates;
}

nlohmann::json causal_to_json(const std::vector<CausalCandidate>& candidates) {
  nlohmann::json out = nlohmann::json::array();
  for (const CausalCandidate& c : candidates) {
    nlohmann::json evidence = nlohmann::json::array();
    for (const EvidenceItem& e : c.explanation.evidence)
      evidence.push_back({{"element_id", e.element_id},
                          {"attribute", e.attribute},
                          {"observed", scalar_to_json(e.observed)}});
    out.push_back({{"node_id", c.node_id},
                   {"kind", c.kind},
                   {"violated_attrs", c.violated_attrs},
                   {"depth", c.depth},
                   {"source", c.explanation.source},
                   {"evidence", std::move(evidence)}});
  }
  return out;
}

}  // namespace dcim::reason
