#include "iam/policy.hpp"

#include <cmath>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

std::optional<double> CapPath::at(int year) const {
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (years[i] == year && binding[i]) return cap_mt[i];
  }
  return std::nullopt;
}

CapPath cap_path(double anchor_mt, int anchor_year, int netzero_year, const TimeGrid& grid) {
  if (anchor_year >= netzero_year) {
    throw BadYears(fmt::format("cap anchor year {} must precede net-zero year {}", anchor_year,
                               netzero_year));
  }
  if (!(anchor_mt > 0.0)) {
    throw BadYears(fmt::format("cap anchor emissions must be positive, got {}", anchor_mt));
  }
  CapPath path;
  for (int y : grid.years()) {
    path.years.push_back(y);
    const bool bound = y > anchor_year;
    path.binding.push_back(bound);
    double cap = 0.0;
    if (!bound) {
      cap = std::numeric_limits<double>::quiet_NaN();
    } else if (y < netzero_year) {
      cap = anchor_mt * static_cast<double>(netzero_year - y) / (netzero_year - anchor_year);
    }
    path.cap_mt.push_back(cap);
  }
  return path;
}

ConstrainedModel apply_scenario(const ModelInstance& instance, const ScenarioConfig& scenario) {
  TechConstraintSet set;
  if (scenario.nuclear_banned_after) {
    for (const auto& t : instance.technologies()) {
      if (t.spec.id == "nuclear" || t.spec.id.starts_with("nuclear-")) {
        set.bans.push_back({t.spec.id, *scenario.nuclear_banned_after + 1});
      }
    }
  }
  bool profile_found = scenario.exogenous_trajectories == "none";
  for (const auto& row : instance.dataset().trajectories) {
    if (row.profile == "history") set.trajectories.push_back(row);
    if (row.profile == scenario.exogenous_trajectories) {
      set.trajectories.push_back(row);
      profile_found = true;
    }
  }
  if (!profile_found) {
    throw UnknownScenarioKey(fmt::format("scenario '{}' names unknown trajectory profile '{}'",
                                         scenario.name, scenario.exogenous_trajectories));
  }
  set.cost_overrides.push_back({"storage_cost_usd_per_t", scenario.storage_cost_usd_per_t});
  set.cost_overrides.push_back({"dac_cost_usd_per_t", scenario.dac_cost_usd_per_t});
  return ConstrainedModel(instance, scenario, std::move(set));
}

PriceEvaluation evaluate_carbon_price(const ConstrainedModel& model, const RunState& state,
                                      double carbon_price, const SolverOptions& options) {
  PriceEvaluation e;
  e.solution = solve_period(model, state, carbon_price, options);
  if (!e.solution.converged) {
    throw NoConvergence(fmt::format("scenario '{}', {}, carbon price {:.4f}: markets did not clear",
                                    model.scenario().name, e.solution.year, carbon_price),
                        e.solution.residual, e.solution.iterations);
  }
  e.ledger = account_emissions(e.solution, model.base());
  return e;
}

CarbonPriceResult solve_carbon_price(const ConstrainedModel& model, const RunState& state,
                                     double cap_mt, const CarbonPriceOptions& opt) {
  if (cap_mt < 0.0 || !std::isfinite(cap_mt)) {
    throw BadValue(fmt::format("emission cap must be finite and non-negative, got {}", cap_mt));
  }
  CarbonPriceResult r;
  auto eval = [&](double tau) {
    ++r.evaluations;
    return evaluate_carbon_price(model, state, tau, opt.solver);
  };
  auto free = eval(0.0);
  if (free.ledger.net_mt() <= cap_mt) {
    r.carbon_price = 0.0;
    r.evaluation = std::move(free);
    return r;
  }
  auto top = eval(opt.tau_max);
  const double top_net = top.ledger.net_mt();
  if (top_net > cap_mt + opt.tolerance_mt) {
    throw CapInfeasible(fmt::format("scenario '{}', {}: net emissions {:.3f} Mt at {} $/t exceed cap {:.3f} Mt",
                                    model.scenario().name, top.solution.year, top_net,
                                    opt.tau_max, cap_mt),
                        top_net - cap_mt);
  }
  double lo = 0.0;
  double hi = opt.tau_max;
  r.carbon_price = hi;
  r.evaluation = std::move(top);
  double best_gap = std::abs(top_net - cap_mt);
  for (int i = 0; i < opt.max_iterations && best_gap > opt.tolerance_mt; ++i) {
    const double mid = 0.5 * (lo + hi);
    auto e = eval(mid);
    const double net = e.ledger.net_mt();
    const double gap = std::abs(net - cap_mt);
    if (gap < best_gap) {
      best_gap = gap;
      r.carbon_price = mid;
      r.evaluation = std::move(e);
    }
    (net > cap_mt ? lo : hi) = mid;
  }
  return r;
}

const PeriodRecord& RunResult::at_year(int year) const {
  for (const auto& p : periods) {
    if (p.solution.year == year) return p;
  }
  throw BadYears(fmt::format("run '{}' has no period {}", scenario, year));
}

RunResult run_horizon(const ConstrainedModel& model, const CarbonPriceOptions& opt) {
  const auto& base = model.base();
  const auto& grid = base.grid();
  const int anchor_year = static_cast<int>(base.dataset().parameters.scalar("history_last_year"));
  const auto& netzero = model.scenario().netzero_year;
  if (netzero && *netzero <= anchor_year) {
    throw BadYears(fmt::format("net-zero year {} must follow the cap anchor year {}", *netzero, anchor_year));
  }

  RunResult run;
  run.scenario = model.scenario().name;
  RunState state = initial_state(model);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const int year = grid.year(p);
    PeriodRecord rec;
    rec.start = state;
    try {
      if (run.cap && run.cap->at(year)) {
        rec.cap_mt = run.cap->at(year);
        auto r = solve_carbon_price(model, state, *rec.cap_mt, opt);
        rec.carbon_price = r.carbon_price;
        rec.solution = std::move(r.evaluation.solution);
        rec.ledger = r.evaluation.ledger;
      } else {
        auto e = evaluate_carbon_price(model, state, 0.0, opt.solver);
        rec.solution = std::move(e.solution);
        rec.ledger = e.ledger;
      }
    } catch (const InfeasibleConstraintSet& e) {
      throw InfeasibleConstraintSet(fmt::format("scenario '{}': {}", run.scenario, e.what()));
    }
    if (netzero && year == anchor_year) {
      run.cap = cap_path(rec.ledger.net_mt(), anchor_year, *netzero, grid);
    }
    advance(state, model, rec.solution);
    run.periods.push_back(std::move(rec));
  }
  return run;
}

}  // namespace iam
