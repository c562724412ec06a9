#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace iam {

/// One scenario definition: availability switches, cost levers, the cap
/// pathway and an optional named capacity-trajectory profile.
struct ScenarioConfig {
  std::string name;
  std::optional<int> netzero_year;          // cap = linear(year); none when empty
  std::optional<int> nuclear_banned_after;  // banned_after(year); free when empty
  double storage_cost_usd_per_t = 1000.0;
  double dac_cost_usd_per_t = 200.0;
  std::string exogenous_trajectories = "none";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses `key=value` lines; `#` starts a comment. Every key is required
/// exactly once. Throws UnknownKey or BadValue naming the line.
ScenarioConfig parse_scenario(std::string_view text, std::string_view origin = "<string>");
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(serialize(c)) == c.
std::string serialize(const ScenarioConfig& config);

}  // namespace iam
