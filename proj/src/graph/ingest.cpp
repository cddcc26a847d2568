#include "dcim/graph/ingest.hpp"

#include <algorithm>

namespace dcim::graph {

using udcp::Delta;
using udcp::DeltaAction;
using udcp::MediaKind;

EdgeId connection_edge_id(const udcp::PortEndpoint& a, const udcp::PortEndpoint& b) {
  std::string ka = udcp::endpoint_key(a), kb = udcp::endpoint_key(b);
  if (kb < ka) std::swap(ka, kb);
  return ka + "<->" + kb;
}

namespace {

void ingest_device(GraphStore& store, const udcp::DeviceRecord& d, IngestSummary& summary) {
  Node n;
  n.node_id = d.device_id;
  n.label = d.device_type;
  if (!d.location.hall.empty()) n.structural_attrs["hall"] = d.location.hall;
  if (!d.location.row.empty()) n.structural_attrs["row"] = d.location.row;
  if (!d.location.position.empty()) n.structural_attrs["position"] = d.location.position;
  // Structural attributes carried opaquely on the wire become graph attrs.
  if (d.extra.is_object()) {
    for (const auto& [k, v] : d.extra.items()) {
      if (v.is_string() || v.is_boolean() || v.is_number()) n.structural_attrs[k] = scalar_from_json(v);
    }
  }
  store.upsert_node(n);
  ++summary.nodes_upserted;

  if (!d.location.hall.empty()) {
    Node hall;
    hall.node_id = "Hall-" + d.location.hall;
    hall.label = "Hall";
    hall.structural_attrs["name"] = d.location.hall;
    store.upsert_node(hall);
    Edge loc;
    loc.edge_id = d.device_id + "@" + hall.node_id;
    loc.kind = EdgeKind::LocatedIn;
    loc.from = d.device_id;
    loc.to = hall.node_id;
    store.upsert_edge(loc);
    ++summary.edges_upserted;
  }
}

void ingest_connection(GraphStore& store, const udcp::ConnectionRecord& c, IngestSummary& summary) {
  Edge e;
  e.edge_id = connection_edge_id(c.a, c.b);
  auto view = store.view();
  auto label_of = [&](const NodeId& id) {
    const Node* n = view->find_node(id);
    return n ? n->label : std::string{};
  };
  if (c.media.kind == MediaKind::Power) {
    e.kind = EdgeKind::PoweredBy;
    // POWERED_BY points consumer -> PDU.
    if (label_of(c.a.device_id) == "PDU" && label_of(c.b.device_id) != "PDU") {
      e.from = c.b.device_id;
      e.to = c.a.device_id;
    } else {
      e.from = c.a.device_id;
      e.to = c.b.device_id;
    }
  } else {
    e.kind = EdgeKind::ConnectedTo;
    e.from = c.a.device_id;
    e.to = c.b.device_id;
  }
  if (c.media.fiber_count) e.attrs["fiber_count"] = std::int64_t(*c.media.fiber_count);
  if (c.media.connector) e.attrs["connector"] = *c.media.connector;
  if (c.media.cable_type) e.attrs["cable_type"] = *c.media.cable_type;
  if (c.media.length_m) e.attrs["length_m"] = *c.media.length_m;
  if (c.media.bandwidth_gbps) e.attrs["bandwidth_gbps"] = *c.media.bandwidth_gbps;
  if (c.label) e.attrs["label"] = *c.label;
  e.attrs["media_kind"] = std::string(udcp::to_string(c.media.kind));
  store.upsert_edge(e);
  ++summary.edges_upserted;
}

}  // namespace

IngestSummary ingest_udcp(GraphStore& store, const udcp::UdcpResult& result) {
  IngestSummary summary;
  if (result.status != udcp::Status::Applied) return summary;

  for (const Delta& d : result.deltas) {
    if (d.kind == Delta::Kind::Device && d.action != DeltaAction::Deleted)
      ingest_device(store, *d.device, summary);
  }
  for (const Delta& d : result.deltas) {
    if (d.kind != Delta::Kind::Connection) continue;
    if (d.action == DeltaAction::Deleted) {
      store.remove_edge(connection_edge_id(d.connection->a, d.connection->b));
      ++summary.edges_removed;
    } else {
      ingest_connection(store, *d.connection, summary);
    }
  }
  return summary;
}

}  // namespace dcim::graph
