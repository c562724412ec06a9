#pragma once

#include <filesystem>

#include "iam/dataset.hpp"

namespace iam {

/// Reads a dataset directory: commodities, technologies, sectors,
/// resources, macro, calibration, history, trajectories and parameters
/// tables (`<name>.csv`). Throws MissingTable or SchemaViolation.
ModelDataset load_dataset(const std::filesystem::path& directory);

}  // namespace iam
