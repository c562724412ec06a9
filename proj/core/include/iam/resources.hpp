#pragma once

#include "iam/dataset.hpp"

namespace iam {

/// Demand beyond the final grade is priced at this multiple of its cost.
inline constexpr double kScarcityMultiplier = 10.0;

struct ResourcePrice {
  double price = 0.0;
  bool scarce = false;
};

/// Cost of the marginal grade needed to meet `annual_demand`. A depletable
/// resource first loses `cumulative_extracted`, and the period extracts
/// `annual_demand * years`; a renewable resource ignores both.
ResourcePrice resource_price(const GradedResource& resource, double annual_demand,
                             double cumulative_extracted = 0.0, double years = 1.0);

/// Annual supply correspondence at a price: every grade strictly cheaper is
/// fully offered (lo), grades exactly at the price may be offered (hi).
/// At the scarcity price supply becomes unbounded.
struct SupplyBounds {
  double lo = 0.0;
  double hi = 0.0;
};

SupplyBounds supply_bounds(const GradedResource& resource, double price,
                           double cumulative_extracted, double years);

/// Total annual quantity left across all grades.
double remaining_annual(const GradedResource& resource, double cumulative_extracted,
                        double years);

/// Moves a tentative price update onto the first grade cost it crosses, so
/// the step-shaped supply curve is never jumped over.
double snap_to_grade(const GradedResource& resource, double from, double to);

}  // namespace iam
