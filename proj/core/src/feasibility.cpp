#include "iam/feasibility.hpp"

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

double mac_integral(std::span<const double> taus, std::span<const double> abatement) {
  if (taus.size() != abatement.size()) {
    throw MisalignedSeries("carbon price and abatement samples differ in length");
  }
  double total = 0.0;
  for (std::size_t k = 1; k < taus.size(); ++k) {
    total += 0.5 * (taus[k] + taus[k - 1]) * (abatement[k] - abatement[k - 1]);
  }
  return total;
}

double mac_policy_cost(const std::function<double(double)>& net_at, double tau_star, int n) {
  if (n < 2) throw BadValue(fmt::format("policy cost needs at least 2 samples, got {}", n));
  if (tau_star <= 0.0) return 0.0;
  std::vector<double> taus(n), abatement(n);
  double base = 0.0;
  for (int k = 0; k < n; ++k) {
    taus[k] = tau_star * k / (n - 1);
    const double net = net_at(taus[k]);
    if (k == 0) base = net;
    abatement[k] = base - net;
  }
  return mac_integral(taus, abatement);
}

std::vector<PolicyCost> policy_cost(const ConstrainedModel& model, const RunResult& run,
                                    int n_samples, const SolverOptions& options) {
  if (!run.cap) throw NoBindingCap(fmt::format("run '{}' has no emission cap", run.scenario));
  const auto& macro = model.base().dataset().macro;
  std::vector<PolicyCost> out;
  for (const auto& rec : run.periods) {
    PolicyCost c;
    c.year = rec.solution.year;
    c.carbon_price = rec.carbon_price;
    c.gdp_musd = macro.gdp(c.year) / 1e6;
    if (rec.cap_mt && rec.carbon_price > 0.0) {
      c.cost_musd = mac_policy_cost(
          [&](double tau) {
            return evaluate_carbon_price(model, rec.start, tau, options).ledger.net_mt();
          },
          rec.carbon_price, n_samples);
    }
    c.percent_gdp = 100.0 * c.cost_musd / c.gdp_musd;
    out.push_back(c);
  }
  return out;
}

double land_requirement(double capacity_gw, std::string_view tech_class) {
  if (capacity_gw < 0.0) throw BadValue(fmt::format("capacity {} GW is negative", capacity_gw));
  if (tech_class == "solar") return capacity_gw * kSolarKm2PerGw;
  if (tech_class == "nuclear") return capacity_gw * kNuclearKm2PerGw;
  throw UnknownTechClass(fmt::format("no land intensity for class '{}'", tech_class));
}

double seoul_multiple(double area_km2, double seoul_km2) { return area_km2 / seoul_km2; }

std::vector<double> expansion_rate(std::span<const double> cap, std::span<const double> system,
                                   double step_years) {
  if (cap.size() != system.size() || cap.size() < 2) {
    throw MisalignedSeries(fmt::format("capacity ({}) and system-size ({}) series must align "
                                       "and span at least two periods",
                                       cap.size(), system.size()));
  }
  std::vector<double> rate;
  for (std::size_t t = 1; t < cap.size(); ++t) {
    if (!(system[t] > 0.0)) {
      throw BadValue(fmt::format("system size at index {} must be positive", t));
    }
    rate.push_back((cap[t] - cap[t - 1]) / step_years / system[t]);
  }
  return rate;
}

StorageDrawdown storage_drawdown(std::span<const int> years, std::span<const double> annual_mt,
                                 double step_years) {
  if (years.size() != annual_mt.size()) {
    throw MisalignedSeries("storage years and rates differ in length");
  }
  StorageDrawdown d;
  double stored_mt = 0.0;
  for (std::size_t i = 0; i < years.size(); ++i) {
    d.years.push_back(years[i]);
    d.cumulative_gt.push_back(stored_mt / 1000.0);
    if (!d.crossed_domestic && stored_mt >= 1000.0) d.crossed_domestic = years[i];
    if (!d.crossed_overseas && stored_mt >= 2000.0) d.crossed_overseas = years[i];
    stored_mt += annual_mt[i] * step_years;
  }
  return d;
}

StorageDrawdown storage_drawdown(const RunResult& run, double step_years) {
  std::vector<int> years;
  std::vector<double> rates;
  for (const auto& p : run.periods) {
    years.push_back(p.solution.year);
    rates.push_back(p.ledger.captured_mt());
  }
  return storage_drawdown(years, rates, step_years);
}

double potential_check(double capacity_gw, double potential_gw) { return potential_gw - capacity_gw; }

double potential_check(double capacity_gw, const Technology& tech) {
  if (!tech.potential_gw) {
    throw UnknownPotential(fmt::format("technology '{}' has no configured potential", tech.id));
  }
  return potential_check(capacity_gw, *tech.potential_gw);
}

FeasibilityReport assess_feasibility(const ConstrainedModel& model, const RunResult& run,
                                     int n_samples, const SolverOptions& options) {
  const auto& base = model.base();
  FeasibilityReport r;
  for (const auto& p : run.periods) r.years.push_back(p.solution.year);
  if (run.cap) {
    for (const auto& c : policy_cost(model, run, n_samples, options)) {
      r.policy_cost_pct.push_back(c.percent_gdp);
    }
  }
  std::vector<double> system_gwh;
  for (const auto& p : run.periods) system_gwh.push_back(power_generation_twh(p.solution, base) * 1000.0);
  for (std::size_t t : base.power_technologies()) {
    const auto& spec = base.technology(t).spec;
    std::vector<double> cap;
    for (const auto& p : run.periods) cap.push_back(p.solution.capacity_gw[t]);
    if (!spec.land_class.empty()) {
      auto& land = r.land_km2[spec.land_class];
      land.resize(cap.size(), 0.0);
      for (std::size_t i = 0; i < cap.size(); ++i) land[i] += land_requirement(cap[i], spec.land_class);
    }
    if (cap.size() >= 2) r.expansion_rate[spec.id] = expansion_rate(cap, system_gwh, base.grid().step());
    if (spec.potential_gw) {
      auto& h = r.headroom_gw[spec.id];
      for (double c : cap) h.push_back(potential_check(c, spec));
    }
  }
  r.storage = storage_drawdown(run, base.grid().step());
  return r;
}

}  // namespace iam
