#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "iam/policy.hpp"

namespace iam {

inline constexpr double kSolarKm2PerGw = 6.6;
inline constexpr double kNuclearKm2PerGw = 0.745;
inline constexpr double kSeoulAreaKm2 = 605.2;

/// Trapezoid integral of tau dA over sampled (tau, abatement) points, in
/// $/t x Mt = million USD.
double mac_integral(std::span<const double> carbon_prices, std::span<const double> abatement_mt);

/// Samples net emissions at n evenly spaced prices on [0, tau_star] and
/// integrates the marginal abatement cost curve. Million USD.
double mac_policy_cost(const std::function<double(double)>& net_emissions_at, double tau_star,
                       int n_samples);

struct PolicyCost {
  int year = 0;
  double carbon_price = 0.0;
  double cost_musd = 0.0;
  double gdp_musd = 0.0;
  double percent_gdp = 0.0;
};

/// Per period; zero wherever no cap binds or the carbon price is zero.
/// Throws NoBindingCap for a run without a cap.
std::vector<PolicyCost> policy_cost(const ConstrainedModel& model, const RunResult& run,
                                    int n_samples = 8, const SolverOptions& options = {});

/// km2 for a land class ("solar" or "nuclear"). Throws UnknownTechClass.
double land_requirement(double capacity_gw, std::string_view tech_class);
double seoul_multiple(double area_km2, double seoul_km2 = kSeoulAreaKm2);

/// (cap(t) - cap(t-1)) / step / system_size(t), one entry per step.
/// Throws MisalignedSeries for unequal or too-short series.
std::vector<double> expansion_rate(std::span<const double> capacity_gw,
                                   std::span<const double> system_gwh, double step_years);

struct StorageDrawdown {
  std::vector<int> years;
  std::vector<double> cumulative_gt;  // stored before each year
  std::optional<int> crossed_domestic;  // first year >= 1 Gt
  std::optional<int> crossed_overseas;  // first year >= 2 Gt
};

/// Cumulative storage at year t sums the annual rates of earlier periods
/// times the step.
StorageDrawdown storage_drawdown(std::span<const int> years, std::span<const double> annual_mt,
                                 double step_years);
StorageDrawdown storage_drawdown(const RunResult& run, double step_years);

/// potential - capacity; negative means the potential is exceeded.
double potential_check(double capacity_gw, double potential_gw);
/// Throws UnknownPotential when the technology has no potential.
double potential_check(double capacity_gw, const Technology& tech);

struct FeasibilityReport {
  std::vector<int> years;
  std::vector<double> policy_cost_pct;  // empty when no cap
  std::map<std::string, std::vector<double>> land_km2;        // by land class
  std::map<std::string, std::vector<double>> expansion_rate;  // by technology, from 2nd period
  std::map<std::string, std::vector<double>> headroom_gw;     // by technology with a potential
  StorageDrawdown storage;
};

FeasibilityReport assess_feasibility(const ConstrainedModel& model, const RunResult& run,
                                     int n_samples = 8, const SolverOptions& options = {});

}  // namespace iam
