#include <gtest/gtest.h>

#include <numeric>

#include "iam/errors.hpp"
#include "iam/power.hpp"
#include "toy.hpp"

namespace iam {
namespace {

TEST(VintageStock, SurvivalAndRetirement) {
  for (int age = 0; age < 50; ++age) {
    EXPECT_GE(VintageStock::survival_fraction(age, 30), VintageStock::survival_fraction(age + 1, 30));
  }
  EXPECT_EQ(VintageStock::survival_fraction(30, 30), 0.0);

  VintageStock s(1);
  s.add(0, 2000, 5.0);
  s.add(0, 1990, 3.0);
  s.add(0, 2000, 1.0);
  EXPECT_DOUBLE_EQ(s.surviving(0, 2015, 30), 9.0);
  EXPECT_DOUBLE_EQ(s.surviving(0, 2020, 30), 6.0);
  EXPECT_EQ(s.vintages(0).front().install_year, 1990);
  EXPECT_DOUBLE_EQ(s.retire_oldest(0, 2015, 30, 4.0), 4.0);
  EXPECT_DOUBLE_EQ(s.surviving(0, 2015, 30), 5.0);
  ASSERT_EQ(s.vintages(0).size(), 1u);
  EXPECT_DOUBLE_EQ(s.vintages(0).front().capacity_gw, 5.0);
}

TEST(ExistingUtilization, LinearRampAboveReference) {
  EXPECT_EQ(existing_utilization(5.0, 10.0, 0.5), 1.0);
  EXPECT_EQ(existing_utilization(10.0, 10.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(existing_utilization(12.5, 10.0, 0.5), 0.5);
  EXPECT_EQ(existing_utilization(15.0, 10.0, 0.5), 0.0);
}

struct PowerFixture {
  explicit PowerFixture(ModelDataset d, TechConstraintSet set = {})
      : instance(build_model(std::move(d))), model(instance, test::toy_scenario(), std::move(set)) {
    prices.assign(instance.base_prices().begin(), instance.base_prices().end());
    cond.year = 2015;
    cond.reference_price = 6.0;
    cond.dispatch_ramp = 0.25;
  }
  std::size_t tech(const char* id) const { return instance.technology_index(id); }
  VintageStock empty() const { return VintageStock(instance.technologies().size()); }

  ModelInstance instance;
  ConstrainedModel model;
  std::vector<double> prices;
  PowerConditions cond;
};

TEST(DispatchPower, SurvivingFleetCoversDemandExactly) {
  PowerFixture f(test::toy_dataset());
  auto stock = f.empty();
  stock.add(f.tech("fossil"), 2010, 20.0);
  const double demand = gw_to_ej(20.0, 0.5);
  const auto r = dispatch_power(f.model, demand, stock, f.prices, f.cond);
  for (double gw : r.new_gw) EXPECT_EQ(gw, 0.0);
  EXPECT_NEAR(r.output_ej[f.tech("fossil")], demand, 1e-12);
  EXPECT_EQ(r.stock, stock);
}

TEST(DispatchPower, EqualCostsSplitNewBuildsEvenly) {
  auto d = test::toy_dataset();
  d.technologies[1].non_energy_cost = 6.0;  // fossil LCOE is 2 + 2 * 2
  PowerFixture f(std::move(d));
  const auto r = dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond);
  EXPECT_NEAR(r.output_ej[f.tech("fossil")], 1.0, 1e-9);
  EXPECT_NEAR(r.output_ej[f.tech("clean")], 1.0, 1e-9);
  EXPECT_NEAR(r.reference_shares[f.tech("clean")], 0.5, 1e-12);
  EXPECT_NEAR(r.average_new_cost, 6.0, 1e-9);
}

TEST(DispatchPower, ResidualEnergyToCapacity) {
  PowerFixture f(test::toy_dataset(false));
  const auto r = dispatch_power(f.model, 1.0, f.empty(), f.prices, f.cond);
  // 1 EJ = 277.78 TWh over 0.5 * 8760 h.
  EXPECT_NEAR(r.new_gw[f.tech("fossil")], 277777.78 / (0.5 * 8760.0), 0.01);
  EXPECT_NEAR(r.new_gw[f.tech("fossil")], 63.4, 0.05);
  EXPECT_DOUBLE_EQ(r.stock.surviving(f.tech("fossil"), 2015, 30), r.new_gw[f.tech("fossil")]);
}

TEST(DispatchPower, ExpensiveFleetIsCurtailedBeforeNewBuilds) {
  PowerFixture f(test::toy_dataset());
  auto stock = f.empty();
  stock.add(f.tech("fossil"), 2010, 20.0);
  f.cond.carbon_price = 200.0;  // fossil VC = 4 + 20, far above the reference
  const auto r = dispatch_power(f.model, 0.5, stock, f.prices, f.cond);
  EXPECT_EQ(r.utilization[f.tech("fossil")], 0.0);
  EXPECT_NEAR(std::accumulate(r.output_ej.begin(), r.output_ej.end(), 0.0), 0.5, 1e-9);
  EXPECT_GT(r.new_gw[f.tech("clean")], 0.0);
}

TEST(DispatchPower, PotentialCapsBuilds) {
  auto d = test::toy_dataset();
  d.technologies[1].non_energy_cost = 1.0;
  d.technologies[1].potential_gw = 10.0;
  PowerFixture f(std::move(d));
  const auto r = dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond);
  EXPECT_NEAR(r.new_gw[f.tech("clean")], 10.0, 1e-9);
  EXPECT_NEAR(std::accumulate(r.output_ej.begin(), r.output_ej.end(), 0.0), 2.0, 1e-9);
}

TEST(DispatchPower, FixedTrajectoryPinsCapacity) {
  TechConstraintSet set;
  set.trajectories.push_back({"p", {"fossil"}, 2015, TrajectoryKind::Fixed, 30.0});
  PowerFixture f(test::toy_dataset(), set);
  const auto r = dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond);
  EXPECT_NEAR(r.new_gw[f.tech("fossil")], 30.0, 1e-9);
  EXPECT_NEAR(std::accumulate(r.output_ej.begin(), r.output_ej.end(), 0.0), 2.0, 1e-9);
}

TEST(DispatchPower, ConflictingBoundsAreInfeasible) {
  auto d = test::toy_dataset();
  d.technologies[1].potential_gw = 5.0;
  {
    TechConstraintSet set;
    set.trajectories.push_back({"p", {"clean"}, 2015, TrajectoryKind::Fixed, 8.0});
    PowerFixture f(d, set);
    EXPECT_THROW(dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond), InfeasibleConstraintSet);
  }
  {
    TechConstraintSet set;
    set.trajectories.push_back({"p", {"clean"}, 2015, TrajectoryKind::Min, 6.0});
    PowerFixture f(d, set);
    EXPECT_THROW(dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond), InfeasibleConstraintSet);
  }
  {
    TechConstraintSet set;
    set.bans.push_back({"clean", 2015});
    set.trajectories.push_back({"p", {"clean"}, 2015, TrajectoryKind::Fixed, 2.0});
    PowerFixture f(d, set);
    EXPECT_THROW(dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond), InfeasibleConstraintSet);
  }
  {
    TechConstraintSet set;
    set.trajectories.push_back({"p", {"fossil"}, 2015, TrajectoryKind::Fixed, 1.0});
    set.trajectories.push_back({"p", {"clean"}, 2015, TrajectoryKind::Fixed, 1.0});
    PowerFixture f(d, set);
    EXPECT_THROW(dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond), InfeasibleConstraintSet);
  }
}

TEST(DispatchPower, BannedTechnologyGetsNoBuilds) {
  TechConstraintSet set;
  set.bans.push_back({"clean", 2015});
  PowerFixture f(test::toy_dataset(), set);
  const auto r = dispatch_power(f.model, 2.0, f.empty(), f.prices, f.cond);
  EXPECT_EQ(r.new_gw[f.tech("clean")], 0.0);
  EXPECT_EQ(r.reference_shares[f.tech("clean")], 0.0);
  EXPECT_TRUE(f.model.banned(f.tech("clean"), 2020));
  EXPECT_FALSE(f.model.banned(f.tech("fossil"), 2020));
}

}  // namespace
}  // namespace iam
