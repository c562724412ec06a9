#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iam/time_grid.hpp"

namespace iam {

enum class CommodityKind {
  PrimaryResource,
  SecondaryCarrier,
  EndUseService,
  StorageResource,
  EmissionsPermit,
};

std::string_view to_string(CommodityKind kind);
std::optional<CommodityKind> parse_commodity_kind(std::string_view text);

/// A traded good. Quantities are held in `unit` (EJ, Mt, Gpkm, ...); prices
/// are quoted in 2020USD per price unit (GJ, t, pkm, ...).
/// `price_units_per_quantity` converts one quantity unit into price units,
/// e.g. 1e9 for EJ priced per GJ.
struct Commodity {
  std::string id;
  CommodityKind kind = CommodityKind::SecondaryCarrier;
  std::string unit;
  std::string price_unit;
  double price_units_per_quantity = 1.0;
  /// Counts toward final-energy totals (electrification shares).
  bool is_energy = false;
  /// Biogenic carbon released on combustion, tCO2 per price unit. Treated as
  /// carbon-neutral when emitted; captured biogenic carbon books as removal.
  double biogenic_carbon = 0.0;
};

struct Input {
  std::string commodity;
  double intensity = 0.0;  // input quantity units per output quantity unit
};

struct ShareWeightAnchor {
  int year = 0;
  double multiplier = 1.0;
};

struct Technology {
  std::string id;
  std::string sector;  // owning SectorNode id
  std::string output;
  std::vector<Input> inputs;
  double non_energy_cost = 0.0;     // 2020USD per output price unit, base year
  double annual_cost_change = 0.0;  // fractional change per year after base year
  double emission_factor = 0.0;     // tCO2 per output price unit, before capture
  double capture_fraction = 0.0;
  int lifetime = 30;
  double capacity_factor = 1.0;
  int first_available_year = 0;
  double share_weight = 1.0;  // used only when the nest carries no calibration
  std::vector<ShareWeightAnchor> share_weight_path;
  std::optional<double> potential_gw;
  std::string land_class;
  bool variable_renewable = false;

  /// Exogenous cost path: NE * (1 + annual_cost_change)^(year - base_year).
  double non_energy_cost_at(int year, int base_year) const;
  /// Piecewise-linear interpolation of the multiplier anchors; 1 when none,
  /// flat beyond the outer anchors.
  double share_weight_multiplier(int year) const;
};

enum class SectorRole { EndUse, Power, Conversion, Removal };

std::string_view to_string(SectorRole role);
std::optional<SectorRole> parse_sector_role(std::string_view text);

struct DemandSpec {
  double base_service = 0.0;
  double income_elasticity = 0.0;
  double price_elasticity = 0.0;
};

/// Node of a nested-logit sector tree. Root nodes carry an output commodity
/// and, for end uses, a demand specification.
struct SectorNode {
  std::string id;
  std::string parent;  // empty for a root
  std::string output;  // root only
  SectorRole role = SectorRole::EndUse;
  std::string ledger_sector;  // power, industry, buildings, transport, other
  double logit_exponent = -3.0;
  double share_weight = 1.0;  // weight of this node inside its parent nest
  std::optional<DemandSpec> demand;
};

struct Grade {
  double quantity = 0.0;
  double cost = 0.0;
};

struct GradedResource {
  std::string commodity;
  std::vector<Grade> grades;
  bool depletable = false;
};

struct MacroPoint {
  int year = 0;
  double population = 0.0;
  double gdp_per_capita = 0.0;  // 2020USD per person
};

struct MacroDrivers {
  std::vector<MacroPoint> points;

  const MacroPoint& at(int year) const;
  double population(int year) const { return at(year).population; }
  double gdp_per_capita(int year) const { return at(year).gdp_per_capita; }
  double gdp(int year) const { return population(year) * gdp_per_capita(year); }
};

struct ObservedShare {
  std::string entity;  // technology or sector node id
  double share = 0.0;
};

struct ObservedPrice {
  std::string commodity;
  double price = 0.0;
};

struct InitialVintage {
  std::string technology;
  int install_year = 0;
  double capacity_gw = 0.0;
};

/// Base-year observations used to calibrate share weights and seed the
/// first period's prices and power stock.
struct Calibration {
  std::vector<ObservedShare> shares;
  std::vector<ObservedPrice> prices;
  std::vector<InitialVintage> vintages;
};

struct HistoryPoint {
  std::string technology;
  int year = 0;
  double capacity_gw = 0.0;
};

enum class TrajectoryKind { Fixed, Min, Max };

std::string_view to_string(TrajectoryKind kind);
std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view text);

/// Capacity bound on a technology or a group of technologies in one period.
struct TrajectoryRow {
  std::string profile;
  std::vector<std::string> technologies;
  int year = 0;
  TrajectoryKind kind = TrajectoryKind::Fixed;
  double capacity_gw = 0.0;
};

/// Named scalars plus keyed series (by year or any numeric key) with
/// linear interpolation between keys and flat extrapolation.
class Parameters {
 public:
  void set_scalar(const std::string& name, double value);
  void set_point(const std::string& name, double key, double value);

  bool has(const std::string& name) const;
  double scalar(const std::string& name) const;
  double scalar_or(const std::string& name, double fallback) const;
  double series(const std::string& name, double key) const;
  bool has_series(const std::string& name) const;
  const std::map<double, double>& points(const std::string& name) const;

  const std::map<std::string, double>& scalars() const { return scalars_; }
  const std::map<std::string, std::map<double, double>>& all_series() const {
    return series_;
  }

 private:
  std::map<std::string, double> scalars_;
  std::map<std::string, std::map<double, double>> series_;
};

/// Full static description of the modelled economy, as loaded from disk.
struct ModelDataset {
  TimeGrid grid;
  std::vector<Commodity> commodities;
  std::vector<Technology> technologies;
  std::vector<SectorNode> sectors;
  std::vector<GradedResource> resources;
  MacroDrivers macro;
  Calibration calibration;
  std::vector<HistoryPoint> history;
  std::vector<TrajectoryRow> trajectories;
  Parameters parameters;
};

}  // namespace iam
