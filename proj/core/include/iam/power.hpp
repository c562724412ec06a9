#pragma once

#include <span>
#include <vector>

#include "iam/constraints.hpp"

namespace iam {

struct Vintage {
  int install_year = 0;
  double capacity_gw = 0.0;

  friend bool operator==(const Vintage&, const Vintage&) = default;
};

/// Installed power capacity by technology and install year. A vintage runs
/// at full size while younger than its technology's lifetime, then retires.
class VintageStock {
 public:
  VintageStock() = default;
  explicit VintageStock(std::size_t technologies) : vintages_(technologies) {}

  std::size_t size() const noexcept { return vintages_.size(); }
  const std::vector<Vintage>& vintages(std::size_t tech) const { return vintages_[tech]; }

  void add(std::size_t tech, int install_year, double capacity_gw);
  double surviving(std::size_t tech, int year, int lifetime) const;
  /// Early retirement, oldest surviving vintages first. Returns GW removed.
  double retire_oldest(std::size_t tech, int year, int lifetime, double capacity_gw);

  static double survival_fraction(int age, int lifetime) {
    return age >= 0 && age < lifetime ? 1.0 : 0.0;
  }

  friend bool operator==(const VintageStock&, const VintageStock&) = default;

 private:
  std::vector<std::vector<Vintage>> vintages_;
};

struct PowerConditions {
  int year = 0;
  double carbon_price = 0.0;
  /// Electricity price existing plants are dispatched against. Plants with
  /// variable cost at or below it run fully; utilization falls linearly to
  /// zero at (1 + dispatch_ramp) times it.
  double reference_price = 0.0;
  double dispatch_ramp = 0.5;
  /// Added to the levelized cost of variable renewables (grid integration).
  double integration_adder = 0.0;
};

struct DispatchResult {
  std::vector<double> output_ej;       // per technology; zero outside power
  std::vector<double> existing_gw;     // surviving after early retirement
  std::vector<double> new_gw;          // forced plus logit-allocated builds
  std::vector<double> levelized_cost;  // per output GJ, with integration adder
  std::vector<double> utilization;     // existing-fleet utilization
  /// Logit shares over every technology open to investment this period,
  /// ignoring trajectory bounds and potentials.
  std::vector<double> reference_shares;
  /// Average levelized cost of a further tranche of new capacity (a tenth of
  /// demand) placed like real builds, so exhausted potentials drop out.
  double average_new_cost = 0.0;
  double curtailed_ej = 0.0;
  VintageStock stock;  // after retirements and this period's builds
};

double existing_utilization(double variable_cost, double reference_price, double ramp);

/// Serves electricity demand from surviving vintages in merit order, then
/// meets the remainder with new capacity allocated by logit over levelized
/// costs, honouring technical potentials and the period's capacity bounds.
/// Throws InfeasibleConstraintSet when bounds conflict, exceed a potential,
/// force investment in an unavailable technology, or leave demand unserved.
DispatchResult dispatch_power(const ConstrainedModel& model, double demand_ej,
                              const VintageStock& stock, std::span<const double> prices,
                              const PowerConditions& conditions);

}  // namespace iam
