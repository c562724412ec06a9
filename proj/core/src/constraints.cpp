#include "iam/constraints.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

ConstrainedModel::ConstrainedModel(const ModelInstance& base, ScenarioConfig scenario,
                                   TechConstraintSet constraints)
    : base_(&base),
      scenario_(std::move(scenario)),
      constraints_(std::move(constraints)),
      resources_(base.dataset().resources),
      ne_override_(base.technologies().size()),
      ban_from_(base.technologies().size(), std::numeric_limits<int>::max()) {
  const auto& params = base.dataset().parameters;
  for (const auto& o : constraints_.cost_overrides) {
    if (!(o.value > 0.0)) {
      throw BadValue(fmt::format("cost lever '{}' must be positive, got {}", o.parameter, o.value));
    }
    if (o.parameter == "storage_cost_usd_per_t") {
      storage_scale_ = o.value / params.scalar("storage_reference_cost");
      const auto storage = base.storage_commodity();
      if (!storage) continue;
      if (auto r = base.resource_of(*storage)) {
        for (auto& g : resources_[*r].grades) g.cost *= storage_scale_;
      }
    } else if (o.parameter == "dac_cost_usd_per_t") {
      for (std::size_t t = 0; t < base.technologies().size(); ++t) {
        const auto& rec = base.technology(t);
        if (base.nodes()[rec.root].spec.role == SectorRole::Removal) ne_override_[t] = o.value;
      }
    } else {
      throw UnknownScenarioKey(fmt::format("unknown cost lever '{}'", o.parameter));
    }
  }
  for (const auto& b : constraints_.bans) {
    const auto t = base.find_technology(b.technology);
    if (!t) throw InvalidDataset(fmt::format("ban names unknown technology '{}'", b.technology));
    if (b.from_year < base.grid().first_model_year() || b.from_year > base.grid().end_year() + base.grid().step()) {
      throw BadYears(fmt::format("ban on '{}' from {} lies outside the time grid", b.technology, b.from_year));
    }
    ban_from_[*t] = std::min(ban_from_[*t], b.from_year);
  }
  for (const auto& row : constraints_.trajectories) {
    if (row.capacity_gw < 0.0) {
      throw InvalidDataset(fmt::format("trajectory '{}' has negative capacity", row.profile));
    }
    if (!base.grid().contains(row.year)) continue;  // outside a truncated horizon
    CapacityBound b;
    b.kind = row.kind;
    b.capacity_gw = row.capacity_gw;
    for (const auto& id : row.technologies) {
      const auto t = base.find_technology(id);
      if (!t) throw InvalidDataset(fmt::format("trajectory names unknown technology '{}'", id));
      b.techs.push_back(*t);
    }
    std::sort(b.techs.begin(), b.techs.end());
    bounds_[row.year].push_back(std::move(b));
  }
}

double ConstrainedModel::non_energy_cost(std::size_t tech, int year) const {
  if (ne_override_[tech]) return *ne_override_[tech];
  return base_->technology(tech).spec.non_energy_cost_at(year, base_->grid().base_year());
}

bool ConstrainedModel::banned(std::size_t tech, int year) const {
  return year >= ban_from_[tech];
}

double ConstrainedModel::weight_multiplier(std::size_t tech, int year) const {
  const auto& spec = base_->technology(tech).spec;
  if (year < spec.first_available_year || banned(tech, year)) return 0.0;
  return spec.share_weight_multiplier(year);
}

const std::vector<CapacityBound>& ConstrainedModel::bounds(int year) const {
  static const std::vector<CapacityBound> kNone;
  auto it = bounds_.find(year);
  return it == bounds_.end() ? kNone : it->second;
}

}  // namespace iam
