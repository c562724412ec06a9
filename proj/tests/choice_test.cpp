#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "iam/choice.hpp"
#include "iam/errors.hpp"

namespace iam {
namespace {

constexpr int kInstances = 10000;

struct Instance {
  std::vector<double> costs;
  std::vector<double> weights;
  double exponent = -3.0;
};

Instance random_instance(std::mt19937_64& rng, bool allow_zero_weights = true) {
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> log_cost(std::log(0.5), std::log(200.0));
  std::uniform_real_distribution<double> weight(0.05, 2.0);
  std::uniform_real_distribution<double> exponent(-8.0, -0.5);
  std::bernoulli_distribution zero(0.15);
  Instance in;
  const int n = size(rng);
  for (int i = 0; i < n; ++i) {
    in.costs.push_back(std::exp(log_cost(rng)));
    in.weights.push_back(allow_zero_weights && zero(rng) ? 0.0 : weight(rng));
  }
  if (std::all_of(in.weights.begin(), in.weights.end(), [](double w) { return w == 0.0; })) {
    in.weights[0] = 1.0;
  }
  in.exponent = exponent(rng);
  return in;
}

// Direct evaluation of b_i c_i^g / sum_j b_j c_j^g in long double.
std::vector<double> oracle_shares(const Instance& in) {
  long double total = 0.0L;
  std::vector<long double> terms;
  for (std::size_t i = 0; i < in.costs.size(); ++i) {
    const long double t = in.weights[i] * std::pow(static_cast<long double>(in.costs[i]),
                                                   static_cast<long double>(in.exponent));
    terms.push_back(t);
    total += t;
  }
  std::vector<double> out;
  for (auto t : terms) out.push_back(static_cast<double>(t / total));
  return out;
}

TEST(LevelizedCost, FuelInput) {
  Technology t;
  t.non_energy_cost = 10.0;
  t.inputs = {{"fuel", 2.0}};
  EXPECT_DOUBLE_EQ(levelized_cost(t, {{"fuel", 5.0}}, 0.0), 20.0);
}

TEST(LevelizedCost, NoInputsIsNonEnergyCost) {
  Technology t;
  t.non_energy_cost = 42.0;
  EXPECT_DOUBLE_EQ(levelized_cost(t, {}, 250.0), 42.0);
}

TEST(LevelizedCost, CarbonTerm) {
  Technology t;
  t.emission_factor = 0.1;
  EXPECT_NEAR(levelized_cost(t, {}, 100.0), 10.0, 1e-12);
  t.capture_fraction = 0.9;
  t.inputs = {{"co2-storage", 0.09}};
  EXPECT_NEAR(levelized_cost(t, {{"co2-storage", 50.0}}, 100.0), 1.0 + 4.5, 1e-12);
}

TEST(LevelizedCost, MissingPriceNamesCommodity) {
  Technology t;
  t.inputs = {{"gas", 1.0}};
  try {
    levelized_cost(t, {{"coal", 1.0}}, 0.0);
    FAIL() << "expected MissingPrice";
  } catch (const MissingPrice& e) {
    EXPECT_NE(std::string(e.what()).find("gas"), std::string::npos);
  }
}

TEST(LogitShares, Examples) {
  const std::vector<double> w{1.0, 1.0};
  auto s = logit_shares(std::vector<double>{1.0, 1.0}, w, -3.0);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);

  s = logit_shares(std::vector<double>{1.0, 2.0}, w, -3.0);
  EXPECT_NEAR(s[0], 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(s[1], 1.0 / 9.0, 1e-15);

  s = logit_shares(std::vector<double>{7.0, 0.3}, std::vector<double>{1.0, 0.0}, -3.0);
  EXPECT_EQ(s[0], 1.0);
  EXPECT_EQ(s[1], 0.0);
}

TEST(LogitShares, IdsCarryThrough) {
  const std::vector<std::string> ids{"a", "b"};
  const auto s = logit_shares(ids, std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 1.0}, -3.0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].id, "b");
  EXPECT_NEAR(s[1].share, 1.0 / 9.0, 1e-15);
}

TEST(LogitShares, AllWeightsZero) {
  EXPECT_THROW(logit_shares(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}, -3.0),
               AllWeightsZero);
}

TEST(LogitShares, NonPositiveCostsAreFloored) {
  const auto s = logit_shares(std::vector<double>{-5.0, 0.0, 1.0},
                              std::vector<double>{1.0, 1.0, 1.0}, -2.0);
  EXPECT_NEAR(s[0], 0.5, 1e-9);
  EXPECT_NEAR(s[1], 0.5, 1e-9);
  EXPECT_TRUE(std::all_of(s.begin(), s.end(), [](double x) { return std::isfinite(x); }));
}

TEST(LogitProperties, MatchesDirectFormulaAndSumsToOne) {
  std::mt19937_64 rng(20210101);
  for (int k = 0; k < kInstances; ++k) {
    const auto in = random_instance(rng);
    const auto s = logit_shares(in.costs, in.weights, in.exponent);
    const auto expect = oracle_shares(in);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      ASSERT_GE(s[i], 0.0);
      ASSERT_LE(s[i], 1.0);
      ASSERT_NEAR(s[i], expect[i], 1e-9);
      if (in.weights[i] == 0.0) {
        ASSERT_EQ(s[i], 0.0);
      }
      sum += s[i];
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(LogitProperties, Homogeneity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_lambda(std::log(1e-3), std::log(1e3));
  for (int k = 0; k < kInstances; ++k) {
    const auto in = random_instance(rng);
    const double lambda = std::exp(log_lambda(rng));
    auto scaled = in.costs;
    for (double& c : scaled) c *= lambda;
    const auto a = logit_shares(in.costs, in.weights, in.exponent);
    const auto b = logit_shares(scaled, in.weights, in.exponent);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(LogitProperties, OwnCostMonotonicity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> bump(1.01, 3.0);
  int checked = 0;
  for (int k = 0; k < kInstances; ++k) {
    const auto in = random_instance(rng, false);
    if (in.costs.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, in.costs.size() - 1);
    const std::size_t i = pick(rng);
    auto raised = in.costs;
    raised[i] *= bump(rng);
    const auto before = logit_shares(in.costs, in.weights, in.exponent);
    const auto after = logit_shares(raised, in.weights, in.exponent);
    // Strict in exact arithmetic; shares pinned at 1 - 1e-16 cannot move in doubles.
    if (before[i] > 1e-12 && before[i] < 1.0 - 1e-9) {
      ASSERT_LT(after[i], before[i]);
      ++checked;
    } else {
      ASSERT_LE(after[i], before[i]);
    }
  }
  EXPECT_GT(checked, kInstances / 2);
}

TEST(LogitProperties, DominanceLimit) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    auto in = random_instance(rng, false);
    const auto cheapest = std::min_element(in.costs.begin(), in.costs.end()) - in.costs.begin();
    // Separate the cheapest option by at least 1% so the limit is reached.
    for (std::size_t i = 0; i < in.costs.size(); ++i) {
      if (static_cast<std::ptrdiff_t>(i) != cheapest) {
        in.costs[i] = std::max(in.costs[i], in.costs[cheapest] * 1.01);
      }
    }
    const auto s = logit_shares(in.costs, in.weights, -5000.0);
    ASSERT_NEAR(s[cheapest], 1.0, 1e-9);
  }
}

TEST(NestPrice, GeneralizedMean) {
  const std::vector<double> c{2.0, 4.0};
  const std::vector<double> w{0.5, 0.5};
  EXPECT_NEAR(nest_price(c, w, -1.0), 1.0 / (0.5 / 2.0 + 0.5 / 4.0), 1e-12);
  const std::vector<double> same{3.0, 3.0};
  EXPECT_NEAR(nest_price(same, std::vector<double>{1.0, 0.0}, -4.0), 3.0, 1e-12);
}

TEST(NestPrice, BoundedByCheapestAvailableForUnitWeights) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    auto in = random_instance(rng, false);
    const double total = std::accumulate(in.weights.begin(), in.weights.end(), 0.0);
    for (double& w : in.weights) w /= total;
    const double p = nest_price(in.costs, in.weights, in.exponent);
    ASSERT_LE(p, *std::max_element(in.costs.begin(), in.costs.end()) * (1 + 1e-12));
    ASSERT_GE(p, *std::min_element(in.costs.begin(), in.costs.end()) * (1 - 1e-12));
  }
}

TEST(Calibration, Examples) {
  auto w = calibrate_share_weights(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 1.0}, -3.0);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 1.0);

  w = calibrate_share_weights(std::vector<double>{0.9, 0.1}, std::vector<double>{1.0, 1.0}, -3.0);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_NEAR(w[1], 1.0 / 9.0, 1e-15);
}

TEST(Calibration, ZeroCostWithPositiveShare) {
  EXPECT_THROW(calibrate_share_weights(std::vector<double>{0.5, 0.5},
                                       std::vector<double>{0.0, 1.0}, -3.0),
               ZeroObservedCostWithPositiveShare);
}

TEST(Calibration, SharesMustSumToOne) {
  EXPECT_THROW(calibrate_share_weights(std::vector<double>{0.5, 0.4},
                                       std::vector<double>{1.0, 1.0}, -3.0),
               BadSharesSum);
}

TEST(CalibrationProperties, RoundTrip) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> raw(0.0, 1.0);
  std::bernoulli_distribution zero(0.1);
  for (int k = 0; k < kInstances; ++k) {
    const auto in = random_instance(rng, false);
    std::vector<double> shares;
    for (std::size_t i = 0; i < in.costs.size(); ++i) shares.push_back(zero(rng) ? 0.0 : raw(rng) + 1e-3);
    if (std::accumulate(shares.begin(), shares.end(), 0.0) == 0.0) shares[0] = 1.0;
    const double total = std::accumulate(shares.begin(), shares.end(), 0.0);
    for (double& s : shares) s /= total;

    const auto w = calibrate_share_weights(shares, in.costs, in.exponent);
    ASSERT_NEAR(*std::max_element(w.begin(), w.end()), 1.0, 1e-12);
    const auto back = logit_shares(in.costs, w, in.exponent);
    for (std::size_t i = 0; i < shares.size(); ++i) ASSERT_NEAR(back[i], shares[i], 1e-9);
  }
}

}  // namespace
}  // namespace iam
