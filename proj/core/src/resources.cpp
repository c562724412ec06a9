#include "iam/resources.hpp"

#include <algorithm>
#include <limits>

namespace iam {

namespace {

// Quantity of grade g still available per year of the period.
double available(const GradedResource& r, std::size_t g, double& consumed, double years) {
  const double q = r.grades[g].quantity;
  if (!r.depletable) return q;
  const double used = std::min(consumed, q);
  consumed -= used;
  return (q - used) / years;
}

double scarcity_price(const GradedResource& r) {
  return r.grades.back().cost * kScarcityMultiplier;
}

}  // namespace

ResourcePrice resource_price(const GradedResource& r, double annual_demand,
                             double cumulative_extracted, double years) {
  double consumed = cumulative_extracted;
  double supplied = 0.0;
  for (std::size_t g = 0; g < r.grades.size(); ++g) {
    const double avail = available(r, g, consumed, years);
    if (avail <= 0.0) continue;
    supplied += avail;
    if (annual_demand <= supplied) return {r.grades[g].cost, false};
  }
  return {scarcity_price(r), annual_demand > 0.0 || supplied <= 0.0};
}

SupplyBounds supply_bounds(const GradedResource& r, double price, double cumulative_extracted,
                           double years) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double scarce = scarcity_price(r);
  if (price > scarce) return {kInf, kInf};
  SupplyBounds b;
  double consumed = cumulative_extracted;
  for (std::size_t g = 0; g < r.grades.size(); ++g) {
    const double avail = available(r, g, consumed, years);
    if (r.grades[g].cost < price) b.lo += avail;
    if (r.grades[g].cost <= price) b.hi += avail;
  }
  if (price == scarce) b.hi = kInf;
  return b;
}

double remaining_annual(const GradedResource& r, double cumulative_extracted, double years) {
  double consumed = cumulative_extracted;
  double total = 0.0;
  for (std::size_t g = 0; g < r.grades.size(); ++g) total += available(r, g, consumed, years);
  return total;
}

double snap_to_grade(const GradedResource& r, double from, double to) {
  auto crossed = [&](double c) {
    return to > from ? (c > from && c <= to) : (c < from && c >= to);
  };
  double best = to;
  bool found = false;
  auto consider = [&](double c) {
    if (!crossed(c)) return;
    if (!found || (to > from ? c < best : c > best)) best = c;
    found = true;
  };
  for (const auto& g : r.grades) consider(g.cost);
  consider(scarcity_price(r));
  return best;
}

}  // namespace iam
