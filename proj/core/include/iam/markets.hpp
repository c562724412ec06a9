#pragma once

#include <cstddef>
#include <vector>

#include "iam/constraints.hpp"
#include "iam/power.hpp"

namespace iam {

/// D = D0 * gdppc_ratio^alpha * price_ratio^beta * pop_ratio
double service_demand(double base, double gdppc_ratio, double price_ratio, double pop_ratio,
                      double income_elasticity, double price_elasticity);

struct SolverOptions {
  double damping = 0.25;
  double tolerance = 1e-4;
  int max_iterations = 500;
};

/// Everything carried from one period into the next.
struct RunState {
  std::size_t period = 0;       // index of the next period to solve
  std::vector<double> prices;   // last cleared prices, the next warm start
  VintageStock stock;
  std::vector<double> cumulative_extraction;  // per resource, through the previous period
  double vre_share = 0.0;

  friend bool operator==(const RunState&, const RunState&) = default;
};

RunState initial_state(const ConstrainedModel& model);

struct PeriodSolution {
  std::size_t period = 0;
  int year = 0;
  double carbon_price = 0.0;

  std::vector<double> prices;  // per commodity, 2020USD per price unit
  std::vector<double> demand;  // per commodity, quantity units per year
  std::vector<double> supply;
  std::vector<double> tech_output;      // per technology, output quantity units
  std::vector<double> capacity_gw;      // per technology, operating this period
  std::vector<double> new_capacity_gw;  // per technology, built this period
  std::vector<bool> scarce;             // per resource
  VintageStock stock;                   // after this period's builds and retirements

  double vre_share = 0.0;
  double integration_adder = 0.0;
  double curtailed_ej = 0.0;

  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped tatonnement for one period at a given carbon price, warm-started
/// from the state's prices. Graded resources move by P <- P (D/S)^eta on
/// their supply correspondence; produced carriers move toward their
/// zero-profit cost by the same damping. Returns the best iterate with
/// `converged` false when the budget runs out.
PeriodSolution solve_period(const ConstrainedModel& model, const RunState& state,
                            double carbon_price, const SolverOptions& options = {});

/// Carries an accepted solution into the state for the next period.
void advance(RunState& state, const ConstrainedModel& model, const PeriodSolution& solution);

}  // namespace iam
