#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "apsim/engine.hpp"
#include "apsim/experiments.hpp"

namespace apsim {

nlohmann::json policy_spec_to_json(const PolicySpec& policy);
PolicySpec policy_spec_from_json(const nlohmann::json& j);

nlohmann::json scenario_spec_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_spec_from_json(const nlohmann::json& j);

nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

// Parses and validates; throws on unreadable files, malformed JSON,
// unknown keys, and out-of-range values.
ExperimentConfig load_experiment_config(const std::string& path);

// Full audit dump of a built deployment: positions, channels, link budgets,
// detected-AP lists. Reconstructable from (spec, seed) but handy to diff.
nlohmann::json scenario_to_json(const Scenario& scenario);

void write_trace_jsonl(const std::vector<PeriodRecord>& records, std::ostream& out);

}  // namespace apsim
