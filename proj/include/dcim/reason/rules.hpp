#pragma once

#include <string>
#include <vector>

#include "dcim/graph/pattern.hpp"

namespace dcim::reason {

using graph::AttrPredicate;
using graph::CountPredicate;
using graph::GraphView;
using graph::NodeId;
using graph::Timestamp;

struct Consequence {
  enum class Type { SetState, RaiseAnomaly };
  Type type = Type::RaiseAnomaly;
  // SetState: attribute name + value; RaiseAnomaly: anomaly kind.
  std::string state_name;
  Scalar state_value;
  std::string anomaly_kind;
};

struct Rule {
  std::string rule_id;
  std::string target_label;
  std::vector<AttrPredicate> conditions;
  std::vector<CountPredicate> edge_conditions;
  Consequence consequence;
};

struct EvidenceItem {
  std::string element_id;  // node or edge id in the evaluated view
  std::string attribute;
  Scalar observed;

  bool operator==(const EvidenceItem&) const = default;
};

struct Explanation {
  std::string source;  // rule_id or inference name
  std::vector<EvidenceItem> evidence;

  bool operator==(const Explanation&) const = default;
};

struct Anomaly {
  std::string anomaly_id;
  std::string kind;
  NodeId subject;
  Explanation provenance;
  Timestamp detected_at = 0;

  bool operator==(const Anomaly&) const = default;
};

struct RuleOutcome {
  std::vector<Anomaly> anomalies;                  // ordered by (subject, rule_id)
  std::vector<graph::StateUpdate> state_updates;   // proposed, applied by the caller

  bool operator==(const RuleOutcome&) const = default;
};

// Parallel per-node evaluation; output is deterministic and equals the
// serial reference interpreter exactly.
RuleOutcome evaluate_rules(const GraphView& view, const std::vector<Rule>& rules, Timestamp now);

// Naive serial per-node/per-rule interpreter, kept as the independent
// oracle and benchmark baseline.
RuleOutcome evaluate_rules_reference(const GraphView& view, const std::vector<Rule>& rules,
                                     Timestamp now);

// Deterministic provenance rendering: rule, evidence triples, commit number.
std::string explain(const Anomaly& anomaly, std::uint64_t view_commit);

std::vector<Rule> rules_from_json(const nlohmann::json& doc);
nlohmann::json rules_to_json(const std::vector<Rule>& rules);

// Ships the power-redundancy and thermal-constraint rules plus the coolant
// delta-T watchdog used by the simulator.
std::vector<Rule> builtin_rules();

nlohmann::json anomaly_to_json(const Anomaly& a);

}  // namespace dcim::reason
