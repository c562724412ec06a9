#include "iam/dataset.hpp"

#include <cmath>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::pair<std::string_view, Enum> (&table)[N],
                           std::string_view text) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view name_of(const std::pair<std::string_view, Enum> (&table)[N],
                         Enum value) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

constexpr std::pair<std::string_view, CommodityKind> kCommodityKinds[] = {
    {"primary-resource", CommodityKind::PrimaryResource},
    {"secondary-carrier", CommodityKind::SecondaryCarrier},
    {"end-use-service", CommodityKind::EndUseService},
    {"storage-resource", CommodityKind::StorageResource},
    {"emissions-permit", CommodityKind::EmissionsPermit},
};

constexpr std::pair<std::string_view, SectorRole> kSectorRoles[] = {
    {"end-use", SectorRole::EndUse},
    {"power", SectorRole::Power},
    {"conversion", SectorRole::Conversion},
    {"removal", SectorRole::Removal},
};

constexpr std::pair<std::string_view, TrajectoryKind> kTrajectoryKinds[] = {
    {"fixed", TrajectoryKind::Fixed},
    {"min", TrajectoryKind::Min},
    {"max", TrajectoryKind::Max},
};

double interpolate(const std::map<double, double>& pts, double key) {
  auto hi = pts.lower_bound(key);
  if (hi == pts.end()) return std::prev(hi)->second;
  if (hi->first == key || hi == pts.begin()) return hi->second;
  auto lo = std::prev(hi);
  const double t = (key - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

}  // namespace

std::string_view to_string(CommodityKind kind) { return name_of(kCommodityKinds, kind); }
std::optional<CommodityKind> parse_commodity_kind(std::string_view text) {
  return lookup(kCommodityKinds, text);
}
std::string_view to_string(SectorRole role) { return name_of(kSectorRoles, role); }
std::optional<SectorRole> parse_sector_role(std::string_view text) {
  return lookup(kSectorRoles, text);
}
std::string_view to_string(TrajectoryKind kind) { return name_of(kTrajectoryKinds, kind); }
std::optional<TrajectoryKind> parse_trajectory_kind(std::string_view text) {
  return lookup(kTrajectoryKinds, text);
}

double Technology::non_energy_cost_at(int year, int base_year) const {
  if (annual_cost_change == 0.0 || year <= base_year) return non_energy_cost;
  return non_energy_cost * std::pow(1.0 + annual_cost_change, year - base_year);
}

double Technology::share_weight_multiplier(int year) const {
  if (share_weight_path.empty()) return 1.0;
  std::map<double, double> pts;
  for (const auto& a : share_weight_path) pts[a.year] = a.multiplier;
  return interpolate(pts, year);
}

const MacroPoint& MacroDrivers::at(int year) const {
  for (const auto& p : points) {
    if (p.year == year) return p;
  }
  throw InvalidDataset(fmt::format("macro drivers missing year {}", year));
}

void Parameters::set_scalar(const std::string& name, double value) {
  scalars_[name] = value;
}

void Parameters::set_point(const std::string& name, double key, double value) {
  series_[name][key] = value;
}

bool Parameters::has(const std::string& name) const {
  return scalars_.contains(name) || series_.contains(name);
}

double Parameters::scalar(const std::string& name) const {
  auto it = scalars_.find(name);
  if (it == scalars_.end()) {
    throw InvalidDataset(fmt::format("missing parameter '{}'", name));
  }
  return it->second;
}

double Parameters::scalar_or(const std::string& name, double fallback) const {
  auto it = scalars_.find(name);
  return it == scalars_.end() ? fallback : it->second;
}

bool Parameters::has_series(const std::string& name) const {
  return series_.contains(name);
}

const std::map<double, double>& Parameters::points(const std::string& name) const {
  auto it = series_.find(name);
  if (it == series_.end() || it->second.empty()) {
    throw InvalidDataset(fmt::format("missing parameter series '{}'", name));
  }
  return it->second;
}

double Parameters::series(const std::string& name, double key) const {
  return interpolate(points(name), key);
}

}  // namespace iam
