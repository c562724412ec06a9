#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iam/constraints.hpp"
#include "iam/emissions.hpp"
#include "iam/markets.hpp"

namespace iam {

/// Net-GHG cap per model period. Unbound periods carry no value.
struct CapPath {
  std::vector<int> years;
  std::vector<double> cap_mt;
  std::vector<bool> binding;

  std::optional<double> at(int year) const;
};

/// Straight line from (anchor_year, anchor_mt) to zero at netzero_year;
/// periods up to the anchor are unbound, periods after net zero stay at 0.
/// Throws BadYears unless anchor_year < netzero_year and anchor_mt > 0.
CapPath cap_path(double anchor_mt, int anchor_year, int netzero_year, const TimeGrid& grid);

/// Scenario switches as constraints on a shared base: investment bans,
/// the always-on historical trajectory profile plus the scenario's named
/// profile, and the storage and removal cost levers.
/// Throws UnknownScenarioKey for a profile the dataset does not define.
ConstrainedModel apply_scenario(const ModelInstance& instance, const ScenarioConfig& scenario);

struct CarbonPriceOptions {
  double tau_max = 5000.0;
  double tolerance_mt = 0.5;
  int max_iterations = 60;
  SolverOptions solver;
};

struct PriceEvaluation {
  PeriodSolution solution;
  EmissionsLedger ledger;
};

/// Solves the period at one carbon price; throws NoConvergence when the
/// market solver misses its tolerance.
PriceEvaluation evaluate_carbon_price(const ConstrainedModel& model, const RunState& state,
                                      double carbon_price, const SolverOptions& options = {});

struct CarbonPriceResult {
  double carbon_price = 0.0;
  PriceEvaluation evaluation;
  int evaluations = 0;
};

/// Bisection on the carbon price so that net emissions meet the cap.
/// Returns 0 when the cap is slack. Throws CapInfeasible with the gap when
/// even tau_max leaves emissions above the cap.
CarbonPriceResult solve_carbon_price(const ConstrainedModel& model, const RunState& state,
                                     double cap_mt, const CarbonPriceOptions& options = {});

struct PeriodRecord {
  RunState start;  // state the period was solved from, for re-evaluation
  PeriodSolution solution;
  EmissionsLedger ledger;
  double carbon_price = 0.0;
  std::optional<double> cap_mt;
};

struct Provenance {
  std::string dataset_checksum;
  std::string config_checksum;
  std::string tool_version;
};

struct RunResult {
  std::string scenario;
  std::vector<PeriodRecord> periods;
  std::optional<CapPath> cap;
  Provenance provenance;

  const PeriodRecord& at_year(int year) const;
};

/// Solves every period in order, pricing carbon only where a cap binds.
/// Errors are rethrown with scenario and year context.
RunResult run_horizon(const ConstrainedModel& model, const CarbonPriceOptions& options = {});

}  // namespace iam
