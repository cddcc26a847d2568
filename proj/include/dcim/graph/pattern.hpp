#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcim/graph/graph.hpp"
#include "dcim/scalar.hpp"

namespace dcim::graph {

enum class Direction { Out, In, Any };

struct AttrPredicate {
  std::string attr;
  CmpOp op = CmpOp::Eq;
  Scalar value;

  bool operator==(const AttrPredicate&) const = default;
};

/// Existential edge constraint: the node must have at least one incident
/// edge of this kind satisfying the edge and neighbor predicates.
struct EdgePattern {
  EdgeKind kind = EdgeKind::ConnectedTo;
  Direction direction = Direction::Any;
  std::vector<AttrPredicate> edge_preds;
  std::optional<std::string> neighbor_label;
  std::vector<AttrPredicate> neighbor_preds;

  bool operator==(const EdgePattern&) const = default;
};

/// Aggregate over incident edges of a kind, e.g. POWERED_BY count = 1.
struct CountPredicate {
  EdgeKind kind = EdgeKind::PoweredBy;
  Direction direction = Direction::Out;
  CmpOp op = CmpOp::Eq;
  int count = 0;
  bool distinct_neighbors = true;

  bool operator==(const CountPredicate&) const = default;
};

struct PatternQuery {
  std::string label;
  std::vector<AttrPredicate> node_preds;
  std::vector<EdgePattern> edges;
  std::vector<CountPredicate> counts;

  bool operator==(const PatternQuery&) const = default;
};

struct MatchResult {
  std::vector<NodeId> rows;  // sorted by node_id
  std::vector<std::string> warnings;
};

// Parallel scan over nodes; rows equal the serial reference exactly.
MatchResult match_pattern(const GraphView& view, const PatternQuery& q);

// Serial nested-loop reference evaluation. Kept as the independent oracle
// for tests and as the baseline in the query benchmark.
MatchResult match_pattern_reference(const GraphView& view, const PatternQuery& q);

// Single-node predicate evaluation shared by both paths and the rule engine.
bool node_matches(const GraphView& view, const Node& node, const PatternQuery& q,
                  std::vector<std::string>* warnings);

struct Subgraph {
  // (depth, node_id), ordered by depth then node_id; start excluded.
  std::vector<std::pair<int, NodeId>> nodes;
  std::vector<EdgeId> edges;
};

// Bounded BFS over the given edge kinds. Each node is reported once at its
// minimal depth; depth range is 1..max_depth with max_depth <= 16.
Subgraph traverse(const GraphView& view, const NodeId& start, const std::vector<EdgeKind>& kinds,
                  int min_depth, int max_depth, Direction direction = Direction::Out);

nlohmann::json pattern_to_json(const PatternQuery& q);
PatternQuery pattern_from_json(const nlohmann::json& j);

}  // namespace dcim::graph
