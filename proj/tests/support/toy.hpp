#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "iam/dataset.hpp"
#include "iam/model.hpp"
#include "iam/scenario.hpp"

namespace iam::test {

/// Fuel -> electricity -> service chain. The fuel has two grades,
/// 10 EJ at $2/GJ and 100 EJ at $20/GJ; "fossil" power burns 2 GJ of fuel
/// per GJ and emits 0.1 t/GJ; "heater" turns 1 GJ of electricity into one
/// service unit; service demand is 10 G units at a base price of $7 with
/// price elasticity -0.5 and flat macro drivers. With `clean` a second,
/// emission-free power technology competes at $9/GJ.
ModelDataset toy_dataset(bool clean = true);

/// No cap, no bans, reference cost levers.
ScenarioConfig toy_scenario(std::optional<int> netzero_year = std::nullopt);

std::filesystem::path shipped_data_dir();
std::filesystem::path shipped_scenario(const std::string& name);

/// Built once per process.
const ModelInstance& shipped_instance();

}  // namespace iam::test
