#pragma once

#include "dcim/graph/graph.hpp"
#include "dcim/sim/report.hpp"
#include "dcim/sim/scenario.hpp"

namespace dcim::sim {

/// Drives the full loop: workload -> power/heat -> telemetry -> graph state
/// -> rules/causal inference/controller -> actions feeding back into the
/// next tick. Fully deterministic per (scenario, seed).
SimReport run_scenario(const Scenario& scenario);

// Shipped scenarios, loadable by name; looks in `dir` for <name>.json.
Scenario load_scenario_file(const std::string& path);

}  // namespace dcim::sim
