#include "iam/choice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

namespace {

void check_shape(std::size_t costs, std::size_t weights, double exponent) {
  if (costs == 0 || costs != weights) {
    throw InvalidDataset(fmt::format(
        "logit: cost and weight vectors must have equal non-zero length ({} vs {})",
        costs, weights));
  }
  if (!(exponent < 0.0)) {
    throw InvalidDataset(fmt::format("logit exponent must be negative, got {}", exponent));
  }
}

// log(b_i) + g*log(max(c_i, floor)); -inf for zero weights.
std::vector<double> log_terms(std::span<const double> costs,
                              std::span<const double> weights, double exponent) {
  std::vector<double> out(costs.size());
  bool any = false;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (weights[i] < 0.0 || !std::isfinite(weights[i])) {
      throw InvalidDataset(fmt::format("logit weight {} is not a finite non-negative value",
                                       weights[i]));
    }
    if (weights[i] == 0.0) {
      out[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    any = true;
    const double c = std::max(costs[i], kCostFloor);
    out[i] = std::log(weights[i]) + exponent * std::log(c);
  }
  if (!any) throw AllWeightsZero("every competitor has a zero share weight");
  return out;
}

}  // namespace

double levelized_cost(const Technology& tech, const PriceMap& prices,
                      double carbon_price) {
  double cost = tech.non_energy_cost;
  for (const auto& in : tech.inputs) {
    auto it = prices.find(in.commodity);
    if (it == prices.end()) {
      throw MissingPrice(fmt::format("technology '{}' input '{}' has no price",
                                     tech.id, in.commodity));
    }
    cost += it->second * in.intensity;
  }
  cost += carbon_price * (1.0 - tech.capture_fraction) * tech.emission_factor;
  return cost;
}

std::vector<double> logit_shares(std::span<const double> costs,
                                 std::span<const double> weights, double exponent) {
  check_shape(costs.size(), weights.size(), exponent);
  auto terms = log_terms(costs, weights, exponent);
  const double top = *std::max_element(terms.begin(), terms.end());
  double total = 0.0;
  for (auto& t : terms) {
    t = std::isinf(t) ? 0.0 : std::exp(t - top);
    total += t;
  }
  for (auto& t : terms) t /= total;
  return terms;
}

ShareVector logit_shares(std::span<const std::string> ids,
                         std::span<const double> costs,
                         std::span<const double> weights, double exponent) {
  if (ids.size() != costs.size()) {
    throw InvalidDataset("logit: id and cost vectors differ in length");
  }
  auto s = logit_shares(costs, weights, exponent);
  ShareVector out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({ids[i], s[i]});
  return out;
}

double nest_price(std::span<const double> costs, std::span<const double> weights,
                  double exponent) {
  check_shape(costs.size(), weights.size(), exponent);
  const auto terms = log_terms(costs, weights, exponent);
  const double top = *std::max_element(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) {
    if (!std::isinf(t)) total += std::exp(t - top);
  }
  return std::exp((top + std::log(total)) / exponent);
}

std::vector<double> calibrate_share_weights(std::span<const double> observed_shares,
                                            std::span<const double> base_costs,
                                            double exponent) {
  check_shape(base_costs.size(), observed_shares.size(), exponent);
  std::vector<double> logw(observed_shares.size(),
                           -std::numeric_limits<double>::infinity());
  double total = 0.0;
  for (std::size_t i = 0; i < observed_shares.size(); ++i) {
    const double s = observed_shares[i];
    if (s < 0.0 || !std::isfinite(s)) {
      throw BadSharesSum(fmt::format("observed share {} is not in [0,1]", s));
    }
    total += s;
    if (s == 0.0) continue;
    if (!(base_costs[i] > 0.0)) {
      throw ZeroObservedCostWithPositiveShare(fmt::format(
          "competitor {} has share {} but base cost {}", i, s, base_costs[i]));
    }
    logw[i] = std::log(s) - exponent * std::log(base_costs[i]);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw BadSharesSum(fmt::format("observed shares sum to {:.12f}, expected 1", total));
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(logw.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isinf(logw[i])) w[i] = std::exp(logw[i] - top);
  }
  return w;
}

}  // namespace iam
