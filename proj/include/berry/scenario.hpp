#pragma once

#include <json.hpp>

#include "berry/transport.hpp"

namespace berry {

using json = nlohmann::ordered_json;

// Resolved scenario: model, branch, optional path, method, tolerances and the
// requested outputs. Built by parse_scenario; see the README for the schema.
struct Scenario {
    json echo;  // the validated input document
    HamiltonianFamily model;
    BranchDescriptor branch;
    std::optional<ParameterPath> path;
    std::string method = "ode";  // ode | wilson | both
    std::size_t steps = 2048;
    TransportOptions transport;
    double fd_step = 0.0;  // 0 = default rule
    struct Output {
        std::string kind;  // holonomy | topology | connection_csv | track_csv
        std::string file;  // required for the csv kinds
        std::string section;  // connection_csv: "+", "-" or "global"
        std::size_t samples = 256;  // topology equator samples
        double radius = 1.0;        // topology equator radius
    };
    std::vector<Output> outputs;
};

// Throws ScenarioError on any schema violation.
Scenario parse_scenario(const json& doc);

// Builds a model from {"name":..., "params":{...}} (also used by tests).
HamiltonianFamily model_from_json(const json& spec);

// Builds a path from {"preset":..., "params":{...}}.
ParameterPath path_from_json(const json& spec);

// Executes the scenario and returns the report document. Numerical or domain
// errors propagate as the corresponding exceptions.
json run_scenario(const Scenario& sc);
json run_scenario(const json& doc);

json holonomy_to_json(const HolonomyResult& r, const std::string& branch);
json topology_to_json(const TopologyReport& t);

json list_models_json();
std::string list_models_text();

}  // namespace berry
