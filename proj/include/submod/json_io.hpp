#pragma once

#include <string>

#include "submod/descent.hpp"
#include "submod/instance.hpp"
#include "submod/quantum_sim.hpp"

namespace submod {

// Instance file format: {"kind": "...", "n": int, "params": {...}, "seed": int}.
// Sets, edges and reported element ids are 1-based on the wire.
InstanceSpec instance_spec_from_json(const std::string& text);
std::string instance_spec_to_json(const InstanceSpec& spec);

// Plain-text cut graphs: one `u v w` edge per line, 1-indexed vertices.
InstanceSpec instance_spec_from_edge_list(const std::string& text);

// Loads either format by content (JSON when the first non-space char is '{').
InstanceSpec instance_spec_from_file(const std::string& path);

CostModelConfig cost_config_from_json(const std::string& text);
std::string cost_config_to_json(const CostModelConfig& cfg);

// Solve request: {"epsilon": .., "mode": "classical|quantum|hybrid|auto",
// "seed": .., "cost_model": {...}, "overrides": {"T":..,"N":..,"eta":..}}.
DescentConfig descent_config_from_json(const std::string& text, int n);

std::string report_to_json(const DescentReport& rep);

}  // namespace submod
