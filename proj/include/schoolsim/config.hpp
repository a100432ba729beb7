#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "schoolsim/engine.hpp"
#include "schoolsim/types.hpp"

namespace schoolsim {

// Baseline: calibrated transmissibility at school reproduction number 3 with
// infectivity from 1e6 cp/ml, LFD scale calibrated to mean sensitivity 0.6,
// default policy Reference, 42-day horizon, 250 replications.
ScenarioConfig default_config();

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& config);

ScenarioConfig load_config(const std::string& path);

struct ScenarioCell {
    std::string id;
    ScenarioConfig config;
};

// A config may carry a "grid" object mapping dotted parameter paths to value
// lists; the file then describes the cross product, one scenario per cell.
std::vector<ScenarioCell> load_scenarios(const std::string& path);
std::vector<ScenarioCell> scenarios_from_json(const nlohmann::json& j);

} // namespace schoolsim
