#include "dcim/graph/graph.hpp"

#include <stdexcept>

namespace dcim::graph {

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::ConnectedTo: return "CONNECTED_TO";
    case EdgeKind::PoweredBy: return "POWERED_BY";
    case EdgeKind::LocatedIn: return "LOCATED_IN";
    case EdgeKind::Hosts: return "HOSTS";
    case EdgeKind::DependsOn: return "DEPENDS_ON";
    case EdgeKind::CooledBy: return "COOLED_BY";
    case EdgeKind::SecuredBy: return "SECURED_BY";
    case EdgeKind::PartOf: return "PART_OF";
  }
  return "?";
}

std::optional<EdgeKind> edge_kind_from_string(const std::string& s) {
  if (s == "CONNECTED_TO") return EdgeKind::ConnectedTo;
  if (s == "POWERED_BY") return EdgeKind::PoweredBy;
  if (s == "LOCATED_IN") return EdgeKind::LocatedIn;
  if (s == "HOSTS") return EdgeKind::Hosts;
  if (s == "DEPENDS_ON") return EdgeKind::DependsOn;
  if (s == "COOLED_BY") return EdgeKind::CooledBy;
  if (s == "SECURED_BY") return EdgeKind::SecuredBy;
  if (s == "PART_OF") return EdgeKind::PartOf;
  return std::nullopt;
}

std::optional<Scalar> Node::attr(const std::string& name) const {
  if (auto it = structural_attrs.find(name); it != structural_attrs.end()) return it->second;
  if (auto it = state_attrs.find(name); it != state_attrs.end()) return it->second.value;
  return std::nullopt;
}

GraphView::GraphView(std::uint64_t commit, std::map<NodeId, Node> nodes,
                     std::map<EdgeId, Edge> edges)
    : commit_(commit), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (const auto& [id, e] : edges_) {
    adjacency_[e.from].push_back(id);
    if (e.to != e.from) adjacency_[e.to].push_back(id);
  }
}

const Node* GraphView::find_node(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Edge* GraphView::find_edge(const EdgeId& id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

const std::vector<EdgeId>& GraphView::incident(const NodeId& id) const {
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? empty_ : it->second;
}

NodeId GraphStore::upsert_node(const Node& node) {
  std::lock_guard lock(mutex_);
  if (node.label.empty()) throw std::invalid_argument("node label must be non-empty");
  auto it = nodes_.find(node.node_id);
  if (it == nodes_.end()) {
    nodes_[node.node_id] = node;
  } else {
    // Structural merge only; state attributes are untouched.
    it->second.label = node.label;
    for (const auto& [k, v] : node.structural_attrs) it->second.structural_attrs[k] = v;
  }
  ++commit_;
  cached_.reset();
  return node.node_id;
}

EdgeId GraphStore::upsert_edge(const Edge& edge) {
  std::lock_guard lock(mutex_);
  if (!nodes_.count(edge.from))
    throw std::invalid_argument("dangling edge endpoint: '" + edge.from + "'");
  if (!nodes_.count(edge.to))
    throw std::invalid_argument("dangling edge endpoint: '" + edge.to + "'");
  edges_[edge.edge_id] = edge;
  ++commit_;
  cached_.reset();
  return edge.edge_id;
}

void GraphStore::remove_edge(const EdgeId& id) {
  std::lock_guard lock(mutex_);
  edges_.erase(id);
  ++commit_;
  cached_.reset();
}

void GraphStore::apply_state_update(const StateUpdate& update) {
  std::lock_guard lock(mutex_);
  auto it = nodes_.find(update.node_id);
  if (it == nodes_.end())
    throw std::invalid_argument("unknown node: '" + update.node_id + "'");
  for (const auto& [name, value] : update.attrs) {
    auto sit = it->second.state_attrs.find(name);
    if (sit != it->second.state_attrs.end() && update.ts < sit->second.ts)
      throw std::invalid_argument("time regression on '" + update.node_id + "." + name + "'");
  }
  for (const auto& [name, value] : update.attrs)
    it->second.state_attrs[name] = StateValue{value, update.ts};
  ++commit_;
  cached_.reset();
}

ViewPtr GraphStore::view() const {
  std::lock_guard lock(mutex_);
  if (!cached_) cached_ = std::make_shared<GraphView>(commit_, nodes_, edges_);
  return cached_;
}

nlohmann::json GraphStore::export_snapshot() const {
  std::lock_guard lock(mutex_);
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& [id, n] : nodes_) {
    nlohmann::json structural = nlohmann::json::object();
    for (const auto& [k, v] : n.structural_attrs) structural[k] = scalar_to_json(v);
    nlohmann::json state = nlohmann::json::object();
    for (const auto& [k, v] : n.state_attrs)
      state[k] = nlohmann::json{{"value", scalar_to_json(v.value)}, {"ts", v.ts}};
    nodes.push_back({{"node_id", id},
                     {"label", n.label},
                     {"structural_attrs", std::move(structural)},
                     {"state_attrs", std::move(state)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [id, e] : edges_) {
    nlohmann::json attrs = nlohmann::json::object();
    for (const auto& [k, v] : e.attrs) attrs[k] = scalar_to_json(v);
    edges.push_back({{"edge_id", id},
                     {"kind", to_string(e.kind)},
                     {"from", e.from},
                     {"to", e.to},
                     {"attrs", std::move(attrs)}});
  }
  return nlohmann::json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

void GraphStore::import_snapshot(const nlohmann::json& doc, GraphStore& store) {
  for (const auto& nj : doc.at("nodes")) {
    Node n;
    n.node_id = nj.at("node_id").get<std::string>();
    n.label = nj.at("label").get<std::string>();
    for (const auto& [k, v] : nj.at("structural_attrs").items())
      n.structural_attrs[k] = scalar_from_json(v);
    store.upsert_node(n);
    for (const auto& [k, v] : nj.at("state_attrs").items()) {
      StateUpdate u{n.node_id, {{k, scalar_from_json(v.at("value"))}}, v.at("ts").get<Timestamp>()};
      store.apply_state_update(u);
    }
  }
  for (const auto& ej : doc.at("edges")) {
    Edge e;
    e.edge_id = ej.at("edge_id").get<std::string>();
    auto kind = edge_kind_from_string(ej.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown edge kind in snapshot");
    e.kind = *kind;
    e.from = ej.at("from").get<std::string>();
    e.to = ej.at("to").get<std::string>();
    for (const auto& [k, v] : ej.at("attrs").items()) e.attrs[k] = scalar_from_json(v);
    store.upsert_edge(e);
  }
}

}  // namespace dcim::graph
