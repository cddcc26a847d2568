#include "dcim/graph/pattern.hpp"

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcim::graph {

namespace {

bool eval_pred(const GraphView& view, const Node& node, const AttrPredicate& p,
               std::vector<std::string>* warnings) {
  auto v = node.attr(p.attr);
  if (!v) {
    if (warnings)
      warnings->push_back("unknown attribute '" + p.attr + "' on node '" + node.node_id + "'");
    return false;
  }
  return compare(*v, p.op, p.value);
}

bool edge_touches(const Edge& e, const NodeId& id, Direction dir) {
  switch (dir) {
    case Direction::Out: return e.from == id;
    case Direction::In: return e.to == id;
    case Direction::Any: return e.from == id || e.to == id;
  }
  return false;
}

}  // namespace

bool node_matches(const GraphView& view, const Node& node, const PatternQuery& q,
                  std::vector<std::string>* warnings) {
  if (node.label != q.label) return false;
  for (const AttrPredicate& p : q.node_preds)
    if (!eval_pred(view, node, p, warnings)) return false;

  for (const EdgePattern& ep : q.edges) {
    bool found = false;
    for (const EdgeId& eid : view.incident(node.node_id)) {
      const Edge& e = *view.find_edge(eid);
      if (e.kind != ep.kind || !edge_touches(e, node.node_id, ep.direction)) continue;
      bool ok = true;
      for (const AttrPredicate& p : ep.edge_preds) {
        auto it = e.attrs.find(p.attr);
        if (it == e.attrs.end() || !compare(it->second, p.op, p.value)) { ok = false; break; }
      }
      if (!ok) continue;
      if (ep.neighbor_label || !ep.neighbor_preds.empty()) {
        const NodeId& other = e.from == node.node_id ? e.to : e.from;
        const Node* nb = view.find_node(other);
        if (!nb) continue;
        if (ep.neighbor_label && nb->label != *ep.neighbor_label) continue;
        bool nb_ok = true;
        for (const AttrPredicate& p : ep.neighbor_preds)
          if (!eval_pred(view, *nb, p, nullptr)) { nb_ok = false; break; }
        if (!nb_ok) continue;
      }
      found = true;
      break;
    }
    if (!found) return false;
  }

  for (const CountPredicate& cp : q.counts) {
    std::set<NodeId> neighbors;
    int edges_seen = 0;
    for (const EdgeId& eid : view.incident(node.node_id)) {
      const Edge& e = *view.find_edge(eid);
      if (e.kind != cp.kind || !edge_touches(e, node.node_id, cp.direction)) continue;
      ++edges_seen;
      neighbors.insert(e.from == node.node_id ? e.to : e.from);
    }
    int n = cp.distinct_neighbors ? static_cast<int>(neighbors.size()) : edges_seen;
    if (!compare(Scalar{static_cast<std::int64_t>(n)}, cp.op,
                 Scalar{static_cast<std::int64_t>(cp.count)}))
      return false;
  }
  return true;
}

MatchResult match_pattern(const GraphView& view, const PatternQuery& q) {
  std::vector<const Node*> nodes;
  nodes.reserve(view.nodes().size());
  for (const auto& [id, n] : view.nodes()) nodes.push_back(&n);

  const int n = static_cast<int>(nodes.size());
  std::vector<char> hit(n, 0);
  std::vector<std::vector<std::string>> thread_warnings;

#ifdef _OPENMP
  thread_warnings.resize(omp_get_max_threads());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    hit[i] = node_matches(view, *nodes[i], q, &thread_warnings[omp_get_thread_num()]);
  }
#else
  thread_warnings.resize(1);
  for (int i = 0; i < n; ++i)
    hit[i] = node_matches(view, *nodes[i], q, &thread_warnings[0]);
#endif

  MatchResult result;
  for (int i = 0; i < n; ++i)
    if (hit[i]) result.rows.push_back(nodes[i]->node_id);
  // Map iteration is already sorted by node_id; hits preserve that order.
  std::set<std::string> dedup;
  for (auto& tw : thread_warnings)
    for (auto& w : tw) dedup.insert(std::move(w));
  result.warnings.assign(dedup.begin(), dedup.end());
  return result;
}

// ---------------------------------------------------------------------------
// Serial reference: straight nested loops over the full node and edge sets,
// with its own comparison code. Shares nothing with the indexed path above.

namespace {

bool ref_compare(const Scalar& a, CmpOp op, const Scalar& b) {
  auto num = [](const Scalar& s, double& out) {
    if (std::holds_alternative<std::int64_t>(s)) { out = double(std::get<std::int64_t>(s)); return true; }
    if (std::holds_alternative<double>(s)) { out = std::get<double>(s); return true; }
    return false;
  };
  double x, y;
  if (num(a, x) && num(b, y)) {
    if (op == CmpOp::Eq) return x == y;
    if (op == CmpOp::Ne) return x != y;
    if (op == CmpOp::Lt) return x < y;
    if (op == CmpOp::Gt) return x > y;
    if (op == CmpOp::Le) return x <= y;
    return x >= y;
  }
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<std::string>(a)) {
    const auto& s = std::get<std::string>(a);
    const auto& t = std::get<std::string>(b);
    if (op == CmpOp::Eq) return s == t;
    if (op == CmpOp::Ne) return s != t;
    if (op == CmpOp::Lt) return s < t;
    if (op == CmpOp::Gt) return s > t;
    if (op == CmpOp::Le) return s <= t;
    return s >= t;
  }
  if (std::holds_alternative<bool>(a)) {
    if (op == CmpOp::Eq) return std::get<bool>(a) == std::get<bool>(b);
    if (op == CmpOp::Ne) return std::get<bool>(a) != std::get<bool>(b);
    return false;
  }
  return false;
}

bool ref_node_pred(const Node& node, const AttrPredicate& p, std::vector<std::string>* warnings) {
  if (auto it = node.structural_attrs.find(p.attr); it != node.structural_attrs.end())
    return ref_compare(it->second, p.op, p.value);
  if (auto it = node.state_attrs.find(p.attr); it != node.state_attrs.end())
    return ref_compare(it->second.value, p.op, p.value);
  if (warnings)
    warnings->push_back("unknown attribute '" + p.attr + "' on node '" + node.node_id + "'");
  return false;
}

bool ref_touches(const Edge& e, const NodeId& id, Direction dir) {
  if (dir == Direction::Out) return e.from == id;
  if (dir == Direction::In) return e.to == id;
  return e.from == id || e.to == id;
}

}  // namespace

MatchResult match_pattern_reference(const GraphView& view, const PatternQuery& q) {
  MatchResult result;
  std::set<std::string> warnings;
  for (const auto& [id, node] : view.nodes()) {
    if (node.label != q.label) continue;
    std::vector<std::string> w;
    bool ok = true;
    for (const AttrPredicate& p : q.node_preds)
      if (!ref_node_pred(node, p, &w)) { ok = false; break; }
    warnings.insert(w.begin(), w.end());
    if (!ok) continue;

    for (const EdgePattern& ep : q.edges) {
      bool found = false;
      for (const auto& [eid, e] : view.edges()) {
        if (e.kind != ep.kind || !ref_touches(e, id, ep.direction)) continue;
        bool epred = true;
        for (const AttrPredicate& p : ep.edge_preds) {
          auto it = e.attrs.find(p.attr);
          if (it == e.attrs.end() || !ref_compare(it->second, p.op, p.value)) { epred = false; break; }
        }
        if (!epred) continue;
        if (ep.neighbor_label || !ep.neighbor_preds.empty()) {
          const NodeId& other = e.from == id ? e.to : e.from;
          auto nit = view.nodes().find(other);
          if (nit == view.nodes().end()) continue;
          if (ep.neighbor_label && nit->second.label != *ep.neighbor_label) continue;
          bool npred = true;
          for (const AttrPredicate& p : ep.neighbor_preds)
            if (!ref_node_pred(nit->second, p, nullptr)) { npred = false; break; }
          if (!npred) continue;
        }
        found = true;
        break;
      }
      if (!found) { ok = false; break; }
    }
    if (!ok) continue;

    for (const CountPredicate& cp : q.counts) {
      std::set<NodeId> nbs;
      int cnt = 0;
      for (const auto& [eid, e] : view.edges()) {
        if (e.kind != cp.kind || !ref_touches(e, id, cp.direction)) continue;
        ++cnt;
        nbs.insert(e.from == id ? e.to : e.from);
      }
      int n = cp.distinct_neighbors ? int(nbs.size()) : cnt;
      if (!ref_compare(Scalar{std::int64_t(n)}, cp.op, Scalar{std::int64_t(cp.count)})) {
        ok = false;
        break;
      }
    }
    if (ok) result.rows.push_back(id);
  }
  result.warnings.assign(warnings.begin(), warnings.end());
  return result;
}

Subgraph traverse(const GraphView& view, const NodeId& start, const std::vector<EdgeKind>& kinds,
                  int min_depth, int max_depth, Direction direction) {
  if (!view.find_node(start)) throw std::invalid_argument("unknown start node: '" + start + "'");
  if (max_depth > 16) max_depth = 16;
  std::set<EdgeKind> kind_set(kinds.begin(), kinds.end());

  Subgraph out;
  std::set<NodeId> visited{start};
  std::set<NodeId> frontier{start};
  std::set<EdgeId> used;
  for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::set<NodeId> next;
    for (const NodeId& cur : frontier) {
      for (const EdgeId& eid : view.incident(cur)) {
        const Edge& e = *view.find_edge(eid);
        if (!kind_set.count(e.kind) || !edge_touches(e, cur, direction)) continue;
        const NodeId& other = e.from == cur ? e.to : e.from;
        if (visited.count(other)) continue;
        next.insert(other);
        if (used.insert(eid).second) out.edges.push_back(eid);
      }
    }
    for (const NodeId& id : next) {
      visited.insert(id);
      if (depth >= min_depth) out.nodes.emplace_back(depth, id);
    }
    frontier = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

CmpOp cmp_from_string(const std::string& s) {
  if (s == "=") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  if (s == "<") return CmpOp::Lt;
  if (s == ">") return CmpOp::Gt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">=") return CmpOp::Ge;
  throw std::invalid_argument("unknown comparator '" + s + "'");
}

nlohmann::json preds_to_json(const std::vector<AttrPredicate>& preds) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : preds)
    out.push_back({{"attr", p.attr}, {"op", to_string(p.op)}, {"value", scalar_to_json(p.value)}});
  return out;
}

std::vector<AttrPredicate> preds_from_json(const nlohmann::json& j) {
  std::vector<AttrPredicate> out;
  for (const auto& p : j)
    out.push_back({p.at("attr").get<std::string>(), cmp_from_string(p.at("op").get<std::string>()),
                   scalar_from_json(p.at("value"))});
  return out;
}

const char* dir_to_string(Direction d) {
  return d == Direction::Out ? "out" : d == Direction::In ? "in" : "any";
}

Direction dir_from_string(const std::string& s) {
  if (s == "out") return Direction::Out;
  if (s == "in") return Direction::In;
  if (s == "any") return Direction::Any;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

}  // namespace

nlohmann::json pattern_to_json(const PatternQuery& q) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& ep : q.edges) {
    nlohmann::json e{{"kind", to_string(ep.kind)},
                     {"direction", dir_to_string(ep.direction)},
                     {"edge_preds", preds_to_json(ep.edge_preds)},
                     {"neighbor_preds", preds_to_json(ep.neighbor_preds)}};
    if (ep.neighbor_label) e["neighbor_label"] = *ep.neighbor_label;
    edges.push_back(std::move(e));
  }
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& cp : q.counts)
    counts.push_back({{"kind", to_string(cp.kind)},
                      {"direction", dir_to_string(cp.direction)},
                      {"op", to_string(cp.op)},
                      {"count", cp.count},
                      {"distinct_neighbors", cp.distinct_neighbors}});
  return nlohmann::json{{"label", q.label},
                        {"node_preds", preds_to_json(q.node_preds)},
                        {"edges", std::move(edges)},
                        {"counts", std::move(counts)}};
}

PatternQuery pattern_from_json(const nlohmann::json& j) {
  PatternQuery q;
  q.label = j.at("label").get<std::string>();
  if (j.contains("node_preds")) q.node_preds = preds_from_json(j.at("node_preds"));
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      EdgePattern ep;
      auto kind = edge_kind_from_string(e.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown edge kind");
      ep.kind = *kind;
      if (e.contains("direction")) ep.direction = dir_from_string(e.at("direction").get<std::string>());
      if (e.contains("edge_preds")) ep.edge_preds = preds_from_json(e.at("edge_preds"));
      if (e.contains("neighbor_label")) ep.neighbor_label = e.at("neighbor_label").get<std::string>();
      if (e.contains("neighbor_preds")) ep.neighbor_preds = preds_from_json(e.at("neighbor_preds"));
      q.edges.push_back(std::move(ep));
    }
  }
  if (j.contains("counts")) {
    for (const auto& c : j.at("counts")) {
      CountPredicate cp;
      auto kind = edge_kind_from_string(c.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown edge kind");
      cp.kind = *kind;
      if (c.contains("direction")) cp.direction = dir_from_string(c.at("direction").get<std::string>());
      cp.op = cmp_from_string(c.at("op").get<std::string>());
      cp.count = c.at("count").get<int>();
      if (c.contains("distinct_neighbors")) cp.distinct_neighbors = c.at("distinct_neighbors").get<bool>();
      q.counts.push_back(cp);
    }
  }
  return q;
}

}  // namespace dcim::graph
