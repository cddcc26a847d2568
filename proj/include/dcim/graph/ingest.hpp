#pragma once

#include "dcim/graph/graph.hpp"
#include "dcim/udcp/types.hpp"

namespace dcim::graph {

struct IngestSummary {
  int nodes_upserted = 0;
  int edges_upserted = 0;
  int edges_removed = 0;
};

// Edge id for the connection between two endpoints, orientation-independent.
EdgeId connection_edge_id(const udcp::PortEndpoint& a, const udcp::PortEndpoint& b);

/// Materialize applied UDCP deltas into the knowledge graph: devices become
/// nodes (label = device_type, plus a Hall node and LOCATED_IN edge),
/// connections become CONNECTED_TO or POWERED_BY edges carrying media attrs.
IngestSummary ingest_udcp(GraphStore& store, const udcp::UdcpResult& result);

}  // namespace dcim::graph
