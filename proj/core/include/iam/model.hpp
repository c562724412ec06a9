#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "iam/dataset.hpp"

namespace iam {

inline constexpr double kHoursPerYear = 8760.0;
inline constexpr double kEjPerGwh = 3.6e-6;
inline constexpr double kTwhPerEj = 1.0 / (kEjPerGwh * 1000.0);  // 277.78

/// Annual energy (EJ) from capacity (GW) running at a capacity factor.
double gw_to_ej(double gw, double capacity_factor);
double ej_to_gw(double ej, double capacity_factor);

struct ResolvedInput {
  std::size_t commodity = 0;
  double intensity = 0.0;
  /// Converts input price * intensity into output price units.
  double cost_scale = 1.0;
};

struct TechRecord {
  Technology spec;
  std::size_t output = 0;
  std::size_t node = 0;
  std::size_t root = 0;
  std::vector<ResolvedInput> inputs;
  std::optional<std::size_t> storage_input;
  /// Biogenic CO2 captured per output price unit (tCO2), booked as removal.
  double biogenic_capture = 0.0;
  /// Mt of CO2 per output quantity unit, for emitted/captured accounting.
  double mt_per_emission_unit = 0.0;
  /// Calibrated (or dataset) weight inside the owning nest.
  double base_weight = 1.0;
};

struct NodeRecord {
  SectorNode spec;
  std::optional<std::size_t> parent;
  std::size_t root = 0;
  std::size_t output = 0;  // commodity produced by the tree this node belongs to
  std::vector<std::size_t> child_nodes;
  std::vector<std::size_t> technologies;
  double base_weight = 1.0;  // weight inside parent nest
  double base_service_price = 0.0;  // roots only: service price at base prices
};

/// Validated, fully resolved and calibrated model. Immutable after build.
class ModelInstance {
 public:
  const ModelDataset& dataset() const noexcept { return data_; }
  const TimeGrid& grid() const noexcept { return data_.grid; }

  std::size_t commodity_count() const noexcept { return data_.commodities.size(); }
  const Commodity& commodity(std::size_t i) const { return data_.commodities[i]; }
  std::size_t commodity_index(const std::string& id) const;
  std::optional<std::size_t> find_commodity(const std::string& id) const;

  const std::vector<TechRecord>& technologies() const noexcept { return techs_; }
  const TechRecord& technology(std::size_t i) const { return techs_[i]; }
  std::size_t technology_index(const std::string& id) const;
  std::optional<std::size_t> find_technology(const std::string& id) const;

  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  std::size_t node_index(const std::string& id) const;
  const std::vector<std::size_t>& roots() const noexcept { return roots_; }
  std::size_t power_root() const noexcept { return power_root_; }
  std::optional<std::size_t> removal_root() const noexcept { return removal_root_; }
  std::size_t electricity() const noexcept { return nodes_[power_root_].output; }
  std::optional<std::size_t> storage_commodity() const noexcept { return storage_; }
  std::optional<std::size_t> biomass_commodity() const noexcept { return biomass_; }

  /// Technologies (and nodes) belonging to a power root, in id order.
  const std::vector<std::size_t>& power_technologies() const noexcept { return power_techs_; }

  /// Resource index per commodity, if the commodity is supplied by a grade table.
  std::optional<std::size_t> resource_of(std::size_t commodity) const;
  /// Root node supplying a commodity, if any.
  std::optional<std::size_t> producer_of(std::size_t commodity) const;

  std::span<const double> base_prices() const noexcept { return base_prices_; }

  /// Levelized cost per output price unit, with input-unit scaling and the
  /// biogenic-capture credit. `extra` is added to the non-energy term.
  double levelized_cost(std::size_t tech, std::span<const double> prices,
                        double carbon_price, int year, double extra = 0.0) const;
  /// Fuel, carbon and storage terms only (no non-energy cost).
  double variable_cost(std::size_t tech, std::span<const double> prices,
                       double carbon_price) const;

  /// Stable digest of the dataset contents.
  const std::string& checksum() const noexcept { return checksum_; }

  friend ModelInstance build_model(ModelDataset dataset);

 private:
  ModelDataset data_;
  std::vector<TechRecord> techs_;
  std::vector<NodeRecord> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> power_techs_;
  std::size_t power_root_ = 0;
  std::optional<std::size_t> removal_root_;
  std::optional<std::size_t> storage_;
  std::optional<std::size_t> biomass_;
  std::unordered_map<std::string, std::size_t> commodity_ids_;
  std::unordered_map<std::string, std::size_t> tech_ids_;
  std::unordered_map<std::string, std::size_t> node_ids_;
  std::vector<std::optional<std::size_t>> resource_by_commodity_;
  std::vector<std::optional<std::size_t>> producer_by_commodity_;
  std::vector<double> base_prices_;
  std::string checksum_;
};

/// Validates every type invariant, resolves cross references and calibrates
/// share weights to the base-year observations.
/// Throws DanglingCommodity, BadSharesSum, NonPositiveIntensity or
/// InvalidDataset naming the offending entity.
ModelInstance build_model(ModelDataset dataset);

/// Canonical text rendering of a dataset, used for checksums and the
/// idempotence check.
std::string canonical_text(const ModelDataset& dataset);
std::string sha256_hex(std::string_view bytes);

}  // namespace iam
