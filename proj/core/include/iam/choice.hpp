#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "iam/dataset.hpp"

namespace iam {

/// Costs are clamped to this floor before being raised to a negative logit
/// exponent, so subsidised (zero or negative cost) options stay finite.
inline constexpr double kCostFloor = 1e-6;

using PriceMap = std::map<std::string, double>;

/// Levelized cost of one output unit:
///   NE + sum(price_f * intensity_f) + carbon_price * (1 - capture) * emission_factor
/// Storage cost enters through the storage-resource input's price.
/// Throws MissingPrice naming the first unpriced input.
double levelized_cost(const Technology& tech, const PriceMap& prices,
                      double carbon_price);

struct ShareEntry {
  std::string id;
  double share = 0.0;
};
using ShareVector = std::vector<ShareEntry>;

/// Relative-cost logit: s_i = b_i c_i^g / sum_j b_j c_j^g with g < 0.
/// Zero-weight options receive exactly zero share. Evaluated in log space.
std::vector<double> logit_shares(std::span<const double> costs,
                                 std::span<const double> weights, double exponent);

ShareVector logit_shares(std::span<const std::string> ids,
                         std::span<const double> costs,
                         std::span<const double> weights, double exponent);

/// Weighted generalized mean (sum_j b_j c_j^g)^(1/g): the cost a nest
/// presents to its parent.
double nest_price(std::span<const double> costs, std::span<const double> weights,
                  double exponent);

/// Share weights that make logit_shares(base_costs, w, g) reproduce the
/// observed shares; normalised so the largest weight is 1.
std::vector<double> calibrate_share_weights(std::span<const double> observed_shares,
                                            std::span<const double> base_costs,
                                            double exponent);

}  // namespace iam
