#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "iam/feasibility.hpp"
#include "iam/policy.hpp"

namespace iam {

std::string_view tool_version();

/// A finished scenario: the horizon run plus its feasibility dashboard.
struct ScenarioRun {
  RunResult run;
  FeasibilityReport feasibility;
};

/// Loads, applies and runs one scenario end to end and fills provenance.
ScenarioRun run_scenario(const ModelInstance& instance, const ScenarioConfig& scenario,
                         int policy_cost_samples = 8);

/// Each writer renders one table with units in the header. Output is a
/// pure function of its inputs.
std::string emissions_csv(const ModelInstance& instance, const RunResult& run);
std::string generation_csv(const ModelInstance& instance, const RunResult& run);
std::string final_energy_csv(const ModelInstance& instance, const RunResult& run);
std::string capacity_csv(const ModelInstance& instance, const RunResult& run);
std::string prices_csv(const ModelInstance& instance, const RunResult& run);
std::string feasibility_csv(const ModelInstance& instance, const ScenarioRun& result);
std::string manifest_json(const ScenarioRun& result,
                          const std::vector<std::pair<std::string, std::string>>& files);

/// Writes the six tables and manifest.json into `directory`.
void write_results(const ModelInstance& instance, const ScenarioRun& result,
                   const std::filesystem::path& directory);

/// Joins the feasibility tables of several result directories into one
/// long table keyed (scenario, period, metric).
std::string compare_results(const std::vector<std::filesystem::path>& directories);

}  // namespace iam
