#include "dcim/reason/rules.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcim::reason {

namespace {

using graph::Direction;
using graph::Edge;
using graph::EdgeId;
using graph::Node;

bool edge_touches(const Edge& e, const NodeId& id, Direction dir) {
  if (dir == Direction::Out) return e.from == id;
  if (dir == Direction::In) return e.to == id;
  return e.from == id || e.to == id;
}

struct NodeRuleResult {
  bool fired = false;
  Explanation explanation;
};

NodeRuleResult eval_rule_on_node(const GraphView& view, const Node& node, const Rule& rule) {
  NodeRuleResult res;
  if (node.label != rule.target_label) return res;
  Explanation ex;
  ex.source = rule.rule_id;

  for (const AttrPredicate& p : rule.conditions) {
    auto v = node.attr(p.attr);
    if (!v || !compare(*v, p.op, p.value)) return res;
    ex.evidence.push_back({node.node_id, p.attr, *v});
  }
  for (const CountPredicate& cp : rule.edge_conditions) {
    std::set<NodeId> neighbors;
    std::vector<EdgeId> matched;
    for (const EdgeId& eid : view.incident(node.node_id)) {
      const Edge& e = *view.find_edge(eid);
      if (e.kind != cp.kind || !edge_touches(e, node.node_id, cp.direction)) continue;
      matched.push_back(eid);
      neighbors.insert(e.from == node.node_id ? e.to : e.from);
    }
    std::int64_t n = cp.distinct_neighbors ? std::int64_t(neighbors.size())
                                           : std::int64_t(matched.size());
    if (!compare(Scalar{n}, cp.op, Scalar{std::int64_t(cp.count)})) return res;
    ex.evidence.push_back({node.node_id, std::string(to_string(cp.kind)) + "_count", n});
    for (const EdgeId& eid : matched)
      ex.evidence.push_back({eid, "kind", std::string(to_string(cp.kind))});
  }
  res.fired = true;
  res.explanation = std::move(ex);
  return res;
}

void emit(const GraphView& view, const Node& node, const Rule& rule, Timestamp now,
          RuleOutcome& out) {
  NodeRuleResult r = eval_rule_on_node(view, node, rule);
  if (!r.fired) return;
  if (rule.consequence.type == Consequence::Type::RaiseAnomaly) {
    Anomaly a;
    a.anomaly_id = rule.rule_id + "/" + node.node_id;
    a.kind = rule.consequence.anomaly_kind;
    a.subject = node.node_id;
    a.provenance = std::move(r.explanation);
    a.detected_at = now;
    out.anomalies.push_back(std::move(a));
  } else {
    out.state_updates.push_back(
        {node.node_id, {{rule.consequence.state_name, rule.consequence.state_value}}, now});
  }
}

}  // namespace

RuleOutcome evaluate_rules(const GraphView& view, const std::vector<Rule>& rules, Timestamp now) {
  std::vector<const Node*> nodes;
  nodes.reserve(view.nodes().size());
  for (const auto& [id, n] : view.nodes()) nodes.push_back(&n);

  const int n = static_cast<int>(nodes.size());
  std::vector<RuleOutcome> partial(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n; ++i)
    for (const Rule& rule : rules) emit(view, *nodes[i], rule, now, partial[i]);

  // Node index order is node_id order; rules keep their declaration order.
  RuleOutcome out;
  for (int i = 0; i < n; ++i) {
    std::move(partial[i].anomalies.begin(), partial[i].anomalies.end(),
              std::back_inserter(out.anomalies));
    std::move(partial[i].state_updates.begin(), partial[i].state_updates.end(),
              std::back_inserter(out.state_updates));
  }
  auto by_subject_rule = [](const Anomaly& a, const Anomaly& b) {
    return std::tie(a.subject, a.anomaly_id) < std::tie(b.subject, b.anomaly_id);
  };
  std::stable_sort(out.anomalies.begin(), out.anomalies.end(), by_subject_rule);
  return out;
}

RuleOutcome evaluate_rules_reference(const GraphView& view, const std::vector<Rule>& rules,
                                     Timestamp now) {
  // Deliberately naive: full edge-set scans, no adjacency index.
  RuleOutcome out;
  for (const auto& [id, node] : view.nodes()) {
    for (const Rule& rule : rules) {
      if (node.label != rule.target_label) continue;
      Explanation ex;
      ex.source = rule.rule_id;
      bool ok = true;
      for (const AttrPredicate& p : rule.conditions) {
        std::optional<Scalar> v;
        if (auto it = node.structural_attrs.find(p.attr); it != node.structural_attrs.end())
          v = it->second;
        else if (auto it2 = node.state_attrs.find(p.attr); it2 != node.state_attrs.end())
          v = it2->second.value;
        if (!v || !compare(*v, p.op, p.value)) { ok = false; break; }
        ex.evidence.push_back({id, p.attr, *v});
      }
      if (!ok) continue;
      for (const CountPredicate& cp : rule.edge_conditions) {
        std::set<NodeId> nbs;
        std::vector<EdgeId> matched;
        for (const auto& [eid, e] : view.edges()) {
          bool touches = cp.direction == Direction::Out  ? e.from == id
                         : cp.direction == Direction::In ? e.to == id
                                                         : e.from == id || e.to == id;
          if (e.kind != cp.kind || !touches) continue;
          matched.push_back(eid);
          nbs.insert(e.from == id ? e.to : e.from);
        }
        std::int64_t cnt = cp.distinct_neighbors ? std::int64_t(nbs.size())
                                                 : std::int64_t(matched.size());
        if (!compare(Scalar{cnt}, cp.op, Scalar{std::int64_t(cp.count)})) { ok = false; break; }
        ex.evidence.push_back({id, std::string(to_string(cp.kind)) + "_count", cnt});
        for (const EdgeId& eid : matched) ex.evidence.push_back({eid, "kind", std::string(to_string(cp.kind))});
      }
      if (!ok) continue;
      if (rule.consequence.type == Consequence::Type::RaiseAnomaly) {
        Anomaly a;
        a.anomaly_id = rule.rule_id + "/" + id;
        a.kind = rule.consequence.anomaly_kind;
        a.subject = id;
        a.provenance = std::move(ex);
        a.detected_at = now;
        out.anomalies.push_back(std::move(a));
      } else {
        out.state_updates.push_back(
            {id, {{rule.consequence.state_name, rule.consequence.state_value}}, now});
      }
    }
  }
  std::stable_sort(out.anomalies.begin(), out.anomalies.end(), [](const Anomaly& a, const Anomaly& b) {
    return std::tie(a.subject, a.anomaly_id) < std::tie(b.subject, b.anomaly_id);
  });
  return out;
}

std::string explain(const Anomaly& anomaly, std::uint64_t view_commit) {
  std::ostringstream os;
  os << "anomaly " << anomaly.kind << " on " << anomaly.subject << " (rule "
     << anomaly.provenance.source << ", view commit " << view_commit << ")\n";
  for (const EvidenceItem& e : anomaly.provenance.evidence)
    os << "  evidence: " << e.element_id << "." << e.attribute << " = "
       << scalar_to_display(e.observed) << "\n";
  return os.str();
}

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

}  // namespace

std::vector<Rule> rules_from_json(const nlohmann::json& doc) {
  std::vector<Rule> rules;
  for (const auto& rj : doc) {
    Rule r;
    r.rule_id = rj.at("rule_id").get<std::string>();
    r.target_label = rj.at("target_label").get<std::string>();
    if (rj.contains("conditions")) {
      for (const auto& cj : rj.at("conditions"))
        r.conditions.push_back({cj.at("attr").get<std::string>(),
                                cmp_from_string(cj.at("op").get<std::string>()),
                                scalar_from_json(cj.at("value"))});
    }
    if (rj.contains("edge_conditions")) {
      for (const auto& cj : rj.at("edge_conditions")) {
        CountPredicate cp;
        auto kind = graph::edge_kind_from_string(cj.at("kind").get<std::string>());
        if (!kind) throw std::invalid_argument("unknown edge kind in rule file");
        cp.kind = *kind;
        cp.op = cmp_from_string(cj.at("op").get<std::string>());
        cp.count = cj.at("count").get<int>();
        if (cj.contains("distinct_neighbors"))
          cp.distinct_neighbors = cj.at("distinct_neighbors").get<bool>();
        if (cj.contains("direction")) {
          std::string d = cj.at("direction").get<std::string>();
          cp.direction = d == "in" ? Direction::In : d == "any" ? Direction::Any : Direction::Out;
        }
        r.edge_conditions.push_back(cp);
      }
    }
    const auto& cons = rj.at("consequence");
    std::string type = cons.at("type").get<std::string>();
    if (type == "set_state") {
      r.consequence.type = Consequence::Type::SetState;
      r.consequence.state_name = cons.at("name").get<std::string>();
      r.consequence.state_value = scalar_from_json(cons.at("value"));
    } else if (type == "raise_anomaly") {
      r.consequence.type = Consequence::Type::RaiseAnomaly;
      r.consequence.anomaly_kind = cons.at("kind").get<std::string>();
    } else {
      throw std::invalid_argument("unknown consequence type '" + type + "'");
    }
    rules.push_back(std::move(r));
  }
  return rules;
}

nlohmann::json rules_to_json(const std::vector<Rule>& rules) {
  nlohmann::json out = nlohmann::json::array();
  for (const Rule& r : rules) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& c : r.conditions)
      conditions.push_back(
          {{"attr", c.attr}, {"op", to_string(c.op)}, {"value", scalar_to_json(c.value)}});
    nlohmann::json edge_conditions = nlohmann::json::array();
    for (const auto& c : r.edge_conditions)
      edge_conditions.push_back({{"kind", graph::to_string(c.kind)},
                                 {"op", to_string(c.op)},
                                 {"count", c.count},
                                 {"distinct_neighbors", c.distinct_neighbors},
                                 {"direction", c.direction == Direction::In    ? "in"
                                               : c.direction == Direction::Any ? "any"
                                                                               : "out"}});
    nlohmann::json cons;
    if (r.consequence.type == Consequence::Type::SetState)
      cons = {{"type", "set_state"},
              {"name", r.consequence.state_name},
              {"value", scalar_to_json(r.consequence.state_value)}};
    else
      cons = {{"type", "raise_anomaly"}, {"kind", r.consequence.anomaly_kind}};
    out.push_back({{"rule_id", r.rule_id},
                   {"target_label", r.target_label},
                   {"conditions", std::move(conditions)},
                   {"edge_conditions", std::move(edge_conditions)},
                   {"consequence", std::move(cons)}});
  }
  return out;
}

std::vector<Rule> builtin_rules() {
  std::vector<Rule> rules;

  Rule redundancy;
  redundancy.rule_id = "power-redundancy";
  redundancy.target_label = "Rack";
  redundancy.edge_conditions.push_back(
      {graph::EdgeKind::PoweredBy, Direction::Out, CmpOp::Lt, 2, true});
  redundancy.consequence = {Consequence::Type::RaiseAnomaly, "", {}, "non-redundant-power"};
  rules.push_back(std::move(redundancy));

  Rule thermal;
  thermal.rule_id = "thermal-constraint";
  thermal.target_label = "Rack";
  thermal.conditions.push_back({"temp_c", CmpOp::Gt, std::int64_t{85}});
  thermal.conditions.push_back({"fan_speed", CmpOp::Gt, std::int64_t{95}});
  thermal.consequence = {Consequence::Type::SetState, "state",
                         Scalar{std::string("Thermally Constrained")}, ""};
  rules.push_back(std::move(thermal));

  Rule coolant;
  coolant.rule_id = "coolant-delta-t";
  coolant.target_label = "CoolantLoop";
  coolant.conditions.push_back({"delta_t_k", CmpOp::Gt, 15.0});
  coolant.consequence = {Consequence::Type::RaiseAnomaly, "", {}, "coolant-delta-t-high"};
  rules.push_back(std::move(coolant));

  return rules;
}

nlohmann::json anomaly_to_json(const Anomaly& a) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const EvidenceItem& e : a.provenance.evidence)
    evidence.push_back({{"element_id", e.element_id},
                        {"attribute", e.attribute},
                        {"observed", scalar_to_json(e.observed)}});
  return nlohmann::json{{"anomaly_id", a.anomaly_id},
                        {"kind", a.kind},
                        {"subject", a.subject},
                        {"detected_at", a.detected_at},
                        {"provenance", {{"source", a.provenance.source}, {"evidence", std::move(evidence)}}}};
}

}  // namespace dcim::reason
