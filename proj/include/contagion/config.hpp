#pragma once

#include <string>
#include <vector>

#include "contagion/inference.hpp"

namespace contagion {

// Flat key=value text with '#' comments. Unknown keys are rejected; every
// value is validated. Keys and defaults are listed in the README.
ScenarioConfig parse_scenario_config(const std::string& text, const std::string& source_name);
ScenarioConfig load_scenario_config(const std::string& path);
std::string scenario_config_to_text(const ScenarioConfig& config);

// The built-in study presets: one scenario per (size x hypothesis) cell.
// scale shrinks n_sims and n_bootstrap for quick runs; must be in (0,1].
std::vector<ScenarioConfig> table1_scenarios(double scale, std::uint64_t seed);
std::vector<ScenarioConfig> table2_scenarios(double scale, std::uint64_t seed);

}  // namespace contagion
