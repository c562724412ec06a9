#include "iam/markets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "iam/choice.hpp"
#include "iam/errors.hpp"
#include "iam/resources.hpp"

namespace iam {

double service_demand(double base, double gdppc_ratio, double price_ratio, double pop_ratio,
                      double income_elasticity, double price_elasticity) {
  return base * std::pow(gdppc_ratio, income_elasticity) *
         std::pow(price_ratio, price_elasticity) * pop_ratio;
}

RunState initial_state(const ConstrainedModel& model) {
  const auto& base = model.base();
  RunState s;
  s.prices.assign(base.base_prices().begin(), base.base_prices().end());
  s.stock = VintageStock(base.technologies().size());
  for (const auto& v : base.dataset().calibration.vintages) {
    s.stock.add(base.technology_index(v.technology), v.install_year, v.capacity_gw);
  }
  s.cumulative_extraction.assign(base.dataset().resources.size(), 0.0);
  return s;
}

namespace {

// Floor on the adaptive step, as a fraction of the nominal damping.
constexpr double kMinStepFraction = 1.0 / 256.0;

// One evaluation of every market's demand and every carrier's cost at a
// trial price vector.
struct Flows {
  std::vector<double> demand;
  std::vector<double> tech_output;
  std::vector<double> target;  // zero-profit price per produced commodity
  DispatchResult dispatch;
  double vre_actual = 0.0;
};

class PeriodEvaluator {
 public:
  PeriodEvaluator(const ConstrainedModel& model, const RunState& state, double carbon_price)
      : m_(model), base_(model.base()), state_(state), tau_(carbon_price) {
    year_ = base_.grid().year(state.period);
    const auto& macro = base_.dataset().macro;
    const int by = base_.grid().base_year();
    gdppc_ratio_ = macro.gdp_per_capita(year_) / macro.gdp_per_capita(by);
    pop_ratio_ = macro.population(year_) / macro.population(by);
    const auto& params = base_.dataset().parameters;
    ramp_ = params.scalar("dispatch_ramp");
    removal_capacity_ = base_.removal_root()
                            ? params.series("removal_capacity_mt", year_)
                            : 0.0;
    const std::size_t nt = base_.technologies().size();
    weight_.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) weight_[t] = m_.weight(t, year_);
    cost_.assign(nt, 0.0);
    share_.assign(nt, 0.0);
    node_share_.assign(base_.nodes().size(), 0.0);
    node_price_.assign(base_.nodes().size(), 0.0);
    node_open_.assign(base_.nodes().size(), false);
  }

  int year() const { return year_; }
  double integration_adder(double vre_share) const {
    return base_.dataset().parameters.series("integration_cost", vre_share);
  }

  Flows evaluate(std::span<const double> prices, double vre_share) {
    const std::size_t nc = base_.commodity_count();
    Flows f;
    f.demand.assign(nc, 0.0);
    f.tech_output.assign(base_.technologies().size(), 0.0);
    f.target.assign(nc, 0.0);

    for (std::size_t t = 0; t < base_.technologies().size(); ++t) {
      cost_[t] = m_.levelized_cost(t, prices, tau_, year_);
    }
    // End uses first, then conversions that feed them, then removals.
    for (SectorRole role : {SectorRole::EndUse, SectorRole::Conversion}) {
      for (std::size_t root : base_.roots()) {
        const auto& node = base_.nodes()[root];
        if (node.spec.role != role) continue;
        allocate_tree(root);
        double avg = 0.0;
        for_each_leaf(root, [&](std::size_t t) { avg += share_[t] * std::max(cost_[t], kCostFloor); });
        double q = 0.0;
        if (role == SectorRole::EndUse) {
          const auto& d = *node.spec.demand;
          q = service_demand(d.base_service, gdppc_ratio_, avg / node.base_service_price,
                             pop_ratio_, d.income_elasticity, d.price_elasticity);
        } else {
          q = f.demand[node.output];
        }
        f.target[node.output] = avg;
        f.demand[node.output] = q;
        for_each_leaf(root, [&](std::size_t t) { produce(f, t, q * share_[t]); });
      }
    }
    if (auto root = base_.removal_root()) allocate_removal(f, *root);

    // Power last: it sees every other sector's electricity demand.
    const std::size_t elec = base_.electricity();
    PowerConditions cond;
    cond.year = year_;
    cond.carbon_price = tau_;
    cond.reference_price = prices[elec];
    cond.dispatch_ramp = ramp_;
    cond.integration_adder = integration_adder(vre_share);
    f.dispatch = dispatch_power(m_, f.demand[elec], state_.stock, prices, cond);
    double gen = 0.0;
    double vre = 0.0;
    for (std::size_t t : base_.power_technologies()) {
      produce(f, t, f.dispatch.output_ej[t]);
      gen += f.dispatch.output_ej[t];
      if (base_.technology(t).spec.variable_renewable) vre += f.dispatch.output_ej[t];
    }
    f.target[elec] = f.dispatch.average_new_cost;
    f.vre_actual = gen > 0.0 ? vre / gen : 0.0;
    return f;
  }

 private:
  template <typename Fn>
  void for_each_leaf(std::size_t ni, Fn&& fn) const {
    const auto& node = base_.nodes()[ni];
    for (std::size_t c : node.child_nodes) for_each_leaf(c, fn);
    for (std::size_t t : node.technologies) fn(t);
  }

  // Bottom-up nest prices, then top-down shares, for one tree.
  void price_node(std::size_t ni) {
    const auto& node = base_.nodes()[ni];
    std::vector<double> costs, weights;
    for (std::size_t c : node.child_nodes) {
      price_node(c);
      costs.push_back(node_price_[c]);
      weights.push_back(node_open_[c] ? base_.nodes()[c].base_weight : 0.0);
    }
    for (std::size_t t : node.technologies) {
      costs.push_back(cost_[t]);
      weights.push_back(weight_[t]);
    }
    node_open_[ni] = std::any_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
    node_price_[ni] = node_open_[ni] ? nest_price(costs, weights, node.spec.logit_exponent) : 0.0;
  }

  void share_node(std::size_t ni, double share) {
    const auto& node = base_.nodes()[ni];
    node_share_[ni] = share;
    std::vector<double> costs, weights;
    for (std::size_t c : node.child_nodes) {
      costs.push_back(node_price_[c]);
      weights.push_back(node_open_[c] ? base_.nodes()[c].base_weight : 0.0);
    }
    for (std::size_t t : node.technologies) {
      costs.push_back(cost_[t]);
      weights.push_back(weight_[t]);
    }
    const auto s = logit_shares(costs, weights, node.spec.logit_exponent);
    std::size_t k = 0;
    for (std::size_t c : node.child_nodes) share_node(c, share * s[k++]);
    for (std::size_t t : node.technologies) share_[t] = share * s[k++];
  }

  void allocate_tree(std::size_t root) {
    price_node(root);
    if (!node_open_[root]) {
      throw AllWeightsZero(fmt::format("sector '{}' has no available technology in {}",
                                       base_.nodes()[root].spec.id, year_));
    }
    share_node(root, 1.0);
  }

  // Removal competes against simply paying the carbon price.
  void allocate_removal(Flows& f, std::size_t root) {
    const auto& node = base_.nodes()[root];
    std::vector<double> costs, weights;
    std::vector<std::size_t> techs;
    for_each_leaf(root, [&](std::size_t t) {
      techs.push_back(t);
      costs.push_back(cost_[t]);
      weights.push_back(weight_[t]);
    });
    costs.push_back(std::max(tau_, kCostFloor));
    weights.push_back(1.0);
    const auto s = logit_shares(costs, weights, node.spec.logit_exponent);
    double q = 0.0;
    for (std::size_t k = 0; k < techs.size(); ++k) {
      const double out = removal_capacity_ * s[k];
      share_[techs[k]] = s[k];
      produce(f, techs[k], out);
      q += out;
    }
    f.demand[node.output] = q;
    f.target[node.output] = tau_;
  }

  void produce(Flows& f, std::size_t t, double output) {
    f.tech_output[t] = output;
    if (output <= 0.0) return;
    for (const auto& in : base_.technology(t).inputs) f.demand[in.commodity] += output * in.intensity;
  }

  const ConstrainedModel& m_;
  const ModelInstance& base_;
  const RunState& state_;
  double tau_;
  int year_ = 0;
  double gdppc_ratio_ = 1.0;
  double pop_ratio_ = 1.0;
  double ramp_ = 0.5;
  double removal_capacity_ = 0.0;
  std::vector<double> weight_;
  std::vector<double> cost_;
  std::vector<double> share_;
  std::vector<double> node_share_;
  std::vector<double> node_price_;
  std::vector<bool> node_open_;
};

enum class MarketKind { Resource, Carrier, Passive };

}  // namespace

PeriodSolution solve_period(const ConstrainedModel& model, const RunState& state,
                            double carbon_price, const SolverOptions& opt) {
  const auto& base = model.base();
  if (state.period >= base.grid().size()) {
    throw InvalidDataset(fmt::format("period {} is past the end of the time grid", state.period));
  }
  if (carbon_price < 0.0 || !std::isfinite(carbon_price)) {
    throw InvalidDataset(fmt::format("carbon price {} must be finite and non-negative", carbon_price));
  }
  const std::size_t nc = base.commodity_count();
  const double years = base.grid().step();

  std::vector<MarketKind> kind(nc, MarketKind::Passive);
  for (std::size_t c = 0; c < nc; ++c) {
    if (base.resource_of(c)) {
      kind[c] = MarketKind::Resource;
    } else if (auto p = base.producer_of(c)) {
      const auto role = base.nodes()[*p].spec.role;
      if (role == SectorRole::Power || role == SectorRole::Conversion) kind[c] = MarketKind::Carrier;
    }
  }

  PeriodEvaluator eval(model, state, carbon_price);
  std::vector<double> prices = state.prices;
  double vre = state.vre_share;

  PeriodSolution best;
  best.residual = std::numeric_limits<double>::infinity();
  Flows best_flows;
  std::vector<double> best_prices;
  std::vector<double> best_supply;
  double best_vre = vre;

  std::vector<double> supply(nc, 0.0);
  // Per-market step: the nominal damping, halved whenever a market's excess
  // demand changes sign so elastic markets stop cycling.
  std::vector<double> eta(nc + 1, opt.damping);
  std::vector<int> side(nc + 1, 0);
  auto step = [&](std::size_t c, double excess) {
    const int sign = excess > 0.0 ? 1 : (excess < 0.0 ? -1 : 0);
    if (sign * side[c] < 0) {
      eta[c] = std::max(eta[c] * 0.5, opt.damping * kMinStepFraction);
    } else if (sign != 0) {
      eta[c] = std::min(eta[c] * 1.1, opt.damping);
    }
    if (sign != 0) side[c] = sign;
    return eta[c];
  };
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    Flows f = eval.evaluate(prices, vre);
    double residual = std::abs(f.vre_actual - vre);
    std::vector<double> next = prices;
    for (std::size_t c = 0; c < nc; ++c) {
      const double d = f.demand[c];
      switch (kind[c]) {
        case MarketKind::Resource: {
          const auto r = *base.resource_of(c);
          const auto& res = model.resource(r);
          const auto b = supply_bounds(res, prices[c], state.cumulative_extraction[r], years);
          const double s = std::clamp(d, b.lo, b.hi);
          supply[c] = s;
          const double gap = d == s ? 0.0 : std::abs(d - s) / std::max(s, 1e-12);
          residual = std::max(residual, gap);
          if (gap > 0.0) {
            const double ratio = std::clamp(s > 0.0 ? d / s : 10.0, 0.1, 10.0);
            next[c] = snap_to_grade(res, prices[c], prices[c] * std::pow(ratio, step(c, d - s)));
          }
          break;
        }
        case MarketKind::Carrier: {
          supply[c] = d;
          const double target = std::max(f.target[c], kCostFloor);
          residual = std::max(residual, std::abs(prices[c] - target) / target);
          next[c] = prices[c] * std::pow(target / std::max(prices[c], kCostFloor), step(c, target - prices[c]));
          break;
        }
        case MarketKind::Passive:
          supply[c] = d;
          break;
      }
    }
    if (residual < best.residual) {
      best.residual = residual;
      best_flows = f;
      best_prices = prices;
      best_supply = supply;
      best_vre = vre;
    }
    if (residual < opt.tolerance) {
      best.converged = true;
      break;
    }
    prices = std::move(next);
    vre += step(nc, f.vre_actual - vre) * (f.vre_actual - vre);
  }

  best.period = state.period;
  best.year = eval.year();
  best.carbon_price = carbon_price;
  best.iterations = best.converged ? it + 1 : it;
  best.prices = std::move(best_prices);
  // Services and removal credits are priced at their zero-profit cost.
  for (std::size_t c = 0; c < nc; ++c) {
    if (kind[c] == MarketKind::Passive && base.producer_of(c)) best.prices[c] = best_flows.target[c];
  }
  best.demand = best_flows.demand;
  best.supply = std::move(best_supply);
  best.tech_output = best_flows.tech_output;
  const std::size_t nt = base.technologies().size();
  best.capacity_gw.assign(nt, 0.0);
  best.new_capacity_gw.assign(nt, 0.0);
  for (std::size_t t : base.power_technologies()) {
    best.capacity_gw[t] = best_flows.dispatch.existing_gw[t] + best_flows.dispatch.new_gw[t];
    best.new_capacity_gw[t] = best_flows.dispatch.new_gw[t];
  }
  best.stock = std::move(best_flows.dispatch.stock);
  best.curtailed_ej = best_flows.dispatch.curtailed_ej;
  best.vre_share = best_vre;
  best.integration_adder = eval.integration_adder(best_vre);
  best.scarce.assign(base.dataset().resources.size(), false);
  for (std::size_t c = 0; c < nc; ++c) {
    if (kind[c] != MarketKind::Resource) continue;
    const auto r = *base.resource_of(c);
    best.scarce[r] = best.demand[c] > remaining_annual(model.resource(r),
                                                       state.cumulative_extraction[r], years);
  }
  return best;
}

void advance(RunState& state, const ConstrainedModel& model, const PeriodSolution& solution) {
  const auto& base = model.base();
  if (solution.period != state.period) {
    throw InvalidDataset(fmt::format("solution for period {} applied to state at period {}",
                                     solution.period, state.period));
  }
  const double years = base.grid().step();
  for (std::size_t c = 0; c < base.commodity_count(); ++c) {
    if (auto r = base.resource_of(c); r && base.dataset().resources[*r].depletable) {
      state.cumulative_extraction[*r] += solution.demand[c] * years;
    }
  }
  state.prices = solution.prices;
  state.stock = solution.stock;
  state.vre_share = solution.vre_share;
  ++state.period;
}

}  // namespace iam
