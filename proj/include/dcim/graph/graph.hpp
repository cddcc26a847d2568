#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dcim/scalar.hpp"

namespace dcim::graph {

using NodeId = std::string;
using EdgeId = std::string;
using Timestamp = std::int64_t;

enum class EdgeKind {
  ConnectedTo,
  PoweredBy,
  LocatedIn,
  Hosts,
  DependsOn,
  CooledBy,
  SecuredBy,
  PartOf,
};

const char* to_string(EdgeKind k);
std::optional<EdgeKind> edge_kind_from_string(const std::string& s);

struct StateValue {
  Scalar value;
  Timestamp ts = 0;

  bool operator==(const StateValue&) const = default;
};

/// Dual-layer vertex: static structural attributes plus timestamped state.
struct Node {
  NodeId node_id;
  std::string label;
  std::map<std::string, Scalar> structural_attrs;
  std::map<std::string, StateValue> state_attrs;

  // Structural first, then the live state value.
  std::optional<Scalar> attr(const std::string& name) const;

  bool operator==(const Node&) const = default;
};

struct Edge {
  EdgeId edge_id;
  EdgeKind kind = EdgeKind::ConnectedTo;
  NodeId from;
  NodeId to;
  std::map<std::string, Scalar> attrs;

  bool operator==(const Edge&) const = default;
};

/// Immutable consistent snapshot at a commit point.
class GraphView {
 public:
  GraphView() = default;
  GraphView(std::uint64_t commit, std::map<NodeId, Node> nodes, std::map<EdgeId, Edge> edges);

  std::uint64_t commit_seq() const { return commit_; }
  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  const Node* find_node(const NodeId& id) const;
  const Edge* find_edge(const EdgeId& id) const;

  // Edge ids incident to a node, both directions.
  const std::vector<EdgeId>& incident(const NodeId& id) const;

  bool operator==(const GraphView& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::uint64_t commit_ = 0;
  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::map<NodeId, std::vector<EdgeId>> adjacency_;
  std::vector<EdgeId> empty_;
};

using ViewPtr = std::shared_ptr<const GraphView>;

struct StateUpdate {
  NodeId node_id;
  std::map<std::string, Scalar> attrs;
  Timestamp ts = 0;

  bool operator==(const StateUpdate&) const = default;
};

/// Single-writer commit pipeline; any number of concurrent readers on
/// immutable views.
class GraphStore {
 public:
  NodeId upsert_node(const Node& node);
  EdgeId upsert_edge(const Edge& edge);
  void remove_edge(const EdgeId& id);

  // Throws on unknown node or per-attribute time regression.
  void apply_state_update(const StateUpdate& update);

  ViewPtr view() const;

  // Canonical {"nodes":[...],"edges":[...]} document.
  nlohmann::json export_snapshot() const;
  static void import_snapshot(const nlohmann::json& doc, GraphStore& store);

 private:
  mutable std::mutex mutex_;
  std::uint64_t commit_ = 0;
  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  mutable ViewPtr cached_;  // rebuilt lazily after a commit
};

}  // namespace dcim::graph
