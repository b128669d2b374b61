#pragma once

// JSON (de)serialization for topologies and scenario files. A scenario file
// is a topology plus an "experiment" block holding trial counts, seeds, QoS
// and routing knobs; every field is optional and falls back to the builtin
// defaults, and "topology": "builtin" (or omitting the key) selects the
// built-in reference network.

#include <string>

#include <json.hpp>

#include "backhaul/experiments.hpp"

namespace backhaul {

nlohmann::json topology_to_json(const Topology& topo);
// Throws std::invalid_argument on schema or semantic problems.
Topology topology_from_json(const nlohmann::json& j);

// Scenario <-> config. scenario_to_json always writes a fully-populated
// document, so normalize -> parse round-trips to an equivalent config.
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

// File helpers; throw std::runtime_error on unreadable files and
// std::invalid_argument on malformed content.
ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace backhaul
