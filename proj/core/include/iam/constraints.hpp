#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iam/model.hpp"
#include "iam/scenario.hpp"

namespace iam {

struct InvestmentBan {
  std::string technology;
  int from_year = 0;  // no new capacity in periods >= from_year
};

/// Named cost lever: `storage_cost_usd_per_t` rescales the storage grades
/// relative to the dataset's reference cost; `dac_cost_usd_per_t` replaces
/// the non-energy cost of removal technologies.
struct CostOverride {
  std::string parameter;
  double value = 0.0;
};

struct TechConstraintSet {
  std::vector<InvestmentBan> bans;
  std::vector<TrajectoryRow> trajectories;
  std::vector<CostOverride> cost_overrides;
};

/// A trajectory row resolved to technology indices for one period.
struct CapacityBound {
  std::vector<std::size_t> techs;
  TrajectoryKind kind = TrajectoryKind::Fixed;
  double capacity_gw = 0.0;
};

/// A base instance viewed through one scenario's constraints. The base is
/// never modified; the caller keeps it alive for the lifetime of this view.
class ConstrainedModel {
 public:
  /// Throws UnknownScenarioKey for an unknown cost lever and InvalidDataset
  /// for bans or trajectories naming unknown technologies or off-grid years.
  ConstrainedModel(const ModelInstance& base, ScenarioConfig scenario,
                   TechConstraintSet constraints);

  const ModelInstance& base() const noexcept { return *base_; }
  const ScenarioConfig& scenario() const noexcept { return scenario_; }
  const TechConstraintSet& constraints() const noexcept { return constraints_; }

  double non_energy_cost(std::size_t tech, int year) const;
  /// Availability, share-weight path and bans combined; 0 means no new
  /// capacity or share this period.
  double weight_multiplier(std::size_t tech, int year) const;
  double weight(std::size_t tech, int year) const {
    return base_->technology(tech).base_weight * weight_multiplier(tech, year);
  }
  bool banned(std::size_t tech, int year) const;

  const GradedResource& resource(std::size_t index) const { return resources_[index]; }
  std::optional<std::size_t> resource_of(std::size_t commodity) const {
    return base_->resource_of(commodity);
  }
  double storage_cost_scale() const noexcept { return storage_scale_; }

  const std::vector<CapacityBound>& bounds(int year) const;

  double levelized_cost(std::size_t tech, std::span<const double> prices, double carbon_price,
                        int year, double extra = 0.0) const {
    return non_energy_cost(tech, year) + extra +
           base_->variable_cost(tech, prices, carbon_price);
  }

 private:
  const ModelInstance* base_;
  ScenarioConfig scenario_;
  TechConstraintSet constraints_;
  std::vector<GradedResource> resources_;
  std::vector<std::optional<double>> ne_override_;
  std::vector<int> ban_from_;
  std::map<int, std::vector<CapacityBound>> bounds_;
  double storage_scale_ = 1.0;
};

}  // namespace iam
