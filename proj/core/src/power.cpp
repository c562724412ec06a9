#include "iam/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "iam/choice.hpp"
#include "iam/errors.hpp"

namespace iam {

void VintageStock::add(std::size_t tech, int install_year, double capacity_gw) {
  if (capacity_gw <= 0.0) return;
  auto& v = vintages_[tech];
  for (auto& existing : v) {
    if (existing.install_year == install_year) {
      existing.capacity_gw += capacity_gw;
      return;
    }
  }
  v.push_back({install_year, capacity_gw});
  std::sort(v.begin(), v.end(),
            [](const Vintage& a, const Vintage& b) { return a.install_year < b.install_year; });
}

double VintageStock::surviving(std::size_t tech, int year, int lifetime) const {
  double total = 0.0;
  for (const auto& v : vintages_[tech]) {
    total += v.capacity_gw * survival_fraction(year - v.install_year, lifetime);
  }
  return total;
}

double VintageStock::retire_oldest(std::size_t tech, int year, int lifetime, double capacity_gw) {
  double removed = 0.0;
  for (auto& v : vintages_[tech]) {
    if (removed >= capacity_gw) break;
    if (survival_fraction(year - v.install_year, lifetime) == 0.0) continue;
    const double take = std::min(v.capacity_gw, capacity_gw - removed);
    v.capacity_gw -= take;
    removed += take;
  }
  std::erase_if(vintages_[tech], [](const Vintage& v) { return v.capacity_gw <= 0.0; });
  return removed;
}

double existing_utilization(double variable_cost, double reference_price, double ramp) {
  if (variable_cost <= reference_price) return 1.0;
  const double top = reference_price * (1.0 + ramp);
  if (variable_cost >= top) return 0.0;
  return (top - variable_cost) / (top - reference_price);
}

namespace {

// Half-width of the variable-cost band a fleet is spread over when
// curtailing: relative to its variable cost, with an absolute floor in $/GJ.
constexpr double kMeritBand = 0.05;
constexpr double kMeritBandFloor = 0.25;
// Size of the notional build that prices electricity, as a share of demand.
constexpr double kNotionalBuild = 0.1;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GroupLimit {
  std::vector<std::size_t> techs;
  double headroom_gw = kInf;
};

class Dispatcher {
 public:
  Dispatcher(const ConstrainedModel& model, double demand, const VintageStock& stock,
             std::span<const double> prices, const PowerConditions& cond)
      : m_(model), base_(model.base()), demand_(demand), prices_(prices), cond_(cond) {
    const std::size_t n = base_.technologies().size();
    r_.output_ej.assign(n, 0.0);
    r_.existing_gw.assign(n, 0.0);
    r_.new_gw.assign(n, 0.0);
    r_.levelized_cost.assign(n, 0.0);
    r_.utilization.assign(n, 0.0);
    r_.reference_shares.assign(n, 0.0);
    r_.stock = stock;
    forced_.assign(n, 0.0);
    headroom_.assign(n, 0.0);
    pinned_.assign(n, false);
    weight_.assign(n, 0.0);
    vc_.assign(n, 0.0);
  }

  DispatchResult run() {
    prepare();
    apply_fixed();
    apply_group_max();
    apply_group_min();
    dispatch_existing();
    build_new();
    price_new_builds();
    for (std::size_t t : base_.power_technologies()) {
      r_.stock.add(t, cond_.year, r_.new_gw[t]);
    }
    return std::move(r_);
  }

 private:
  int lifetime(std::size_t t) const { return base_.technology(t).spec.lifetime; }
  double cf(std::size_t t) const { return base_.technology(t).spec.capacity_factor; }
  const std::string& id(std::size_t t) const { return base_.technology(t).spec.id; }

  [[noreturn]] void infeasible(const std::string& what) const {
    throw InfeasibleConstraintSet(fmt::format("power {}: {}", cond_.year, what));
  }

  void prepare() {
    std::vector<double> costs, weights;
    std::vector<std::size_t> open;
    for (std::size_t t : base_.power_technologies()) {
      const auto& spec = base_.technology(t).spec;
      r_.existing_gw[t] = r_.stock.surviving(t, cond_.year, spec.lifetime);
      weight_[t] = m_.weight(t, cond_.year);
      vc_[t] = base_.variable_cost(t, prices_, cond_.carbon_price);
      r_.levelized_cost[t] = m_.levelized_cost(t, prices_, cond_.carbon_price, cond_.year,
                                               spec.variable_renewable ? cond_.integration_adder : 0.0);
      headroom_[t] = spec.potential_gw ? std::max(0.0, *spec.potential_gw - r_.existing_gw[t]) : kInf;
      if (weight_[t] > 0.0) {
        open.push_back(t);
        costs.push_back(r_.levelized_cost[t]);
        weights.push_back(weight_[t]);
      }
    }
    if (open.empty()) throw AllWeightsZero(fmt::format("power {}: no technology open to investment", cond_.year));
    const auto s = logit_shares(costs, weights, base_.nodes()[base_.power_root()].spec.logit_exponent);
    for (std::size_t k = 0; k < open.size(); ++k) {
      r_.reference_shares[open[k]] = s[k];
      r_.average_new_cost += s[k] * std::max(costs[k], kCostFloor);
    }
  }

  double group_total(const std::vector<std::size_t>& techs) const {
    double total = 0.0;
    for (std::size_t t : techs) total += r_.existing_gw[t] + forced_[t];
    return total;
  }

  void apply_fixed() {
    for (const auto& b : m_.bounds(cond_.year)) {
      if (b.kind != TrajectoryKind::Fixed || b.techs.size() != 1) continue;
      const std::size_t t = b.techs[0];
      if (pinned_[t]) infeasible(fmt::format("'{}' pinned twice", id(t)));
      pinned_[t] = true;
      const auto& pot = base_.technology(t).spec.potential_gw;
      if (pot && b.capacity_gw > *pot) {
        infeasible(fmt::format("'{}' pinned to {} GW above its {} GW potential", id(t), b.capacity_gw, *pot));
      }
      const double have = r_.existing_gw[t];
      if (have > b.capacity_gw) {
        r_.stock.retire_oldest(t, cond_.year, lifetime(t), have - b.capacity_gw);
        r_.existing_gw[t] = b.capacity_gw;
      } else if (have < b.capacity_gw) {
        if (weight_[t] <= 0.0) {
          infeasible(fmt::format("'{}' pinned to {} GW needs new capacity but is unavailable",
                                 id(t), b.capacity_gw));
        }
        forced_[t] = b.capacity_gw - have;
      }
      headroom_[t] = 0.0;
    }
  }

  void apply_group_max() {
    for (const auto& b : m_.bounds(cond_.year)) {
      if (b.kind == TrajectoryKind::Min) continue;
      if (b.kind == TrajectoryKind::Fixed && b.techs.size() == 1) continue;
      double locked = 0.0;
      std::vector<std::size_t> movable;
      for (std::size_t t : b.techs) {
        if (pinned_[t]) {
          locked += r_.existing_gw[t] + forced_[t];
        } else {
          movable.push_back(t);
        }
      }
      if (locked > b.capacity_gw + 1e-9) {
        infeasible(fmt::format("pinned members exceed the {} GW group bound", b.capacity_gw));
      }
      double excess = group_total(b.techs) - b.capacity_gw;
      if (excess > 0.0) {
        // Oldest vintages across the group go first; ties by technology id.
        struct Entry { int year; std::size_t tech; double gw; };
        std::vector<Entry> order;
        for (std::size_t t : movable) {
          for (const auto& v : r_.stock.vintages(t)) {
            if (VintageStock::survival_fraction(cond_.year - v.install_year, lifetime(t)) > 0.0) {
              order.push_back({v.install_year, t, v.capacity_gw});
            }
          }
        }
        std::sort(order.begin(), order.end(), [&](const Entry& a, const Entry& b2) {
          return a.year != b2.year ? a.year < b2.year : id(a.tech) < id(b2.tech);
        });
        for (const auto& e : order) {
          if (excess <= 0.0) break;
          const double gone = r_.stock.retire_oldest(e.tech, cond_.year, lifetime(e.tech), std::min(excess, e.gw));
          r_.existing_gw[e.tech] -= gone;
          excess -= gone;
        }
      }
      groups_.push_back({movable, std::max(0.0, b.capacity_gw - group_total(b.techs))});
    }
  }

  // Spreads `amount` over `members` by logit on levelized cost, filling
  // each member up to its headroom before passing the rest on. Amounts are
  // energy (EJ) or, with `in_gw`, capacity.
  std::vector<double> water_fill(const std::vector<std::size_t>& members, double amount,
                                 const std::vector<GroupLimit>& groups, bool in_gw,
                                 bool strict = true) const {
    const double gamma = base_.nodes()[base_.power_root()].spec.logit_exponent;
    const std::size_t n = base_.technologies().size();
    std::vector<double> alloc(n, 0.0);
    std::vector<std::size_t> active = members;
    std::vector<double> group_room;
    for (const auto& g : groups) group_room.push_back(g.headroom_gw);
    double remaining = amount;
    auto to_gw = [&](std::size_t t, double x) { return in_gw ? x : ej_to_gw(x, cf(t)); };
    while (remaining > 1e-12 * std::max(1.0, amount) && !active.empty()) {
      std::vector<double> costs, weights;
      for (std::size_t t : active) {
        costs.push_back(r_.levelized_cost[t]);
        weights.push_back(weight_[t]);
      }
      const auto s = logit_shares(costs, weights, gamma);
      std::vector<double> trial(n, 0.0);
      for (std::size_t k = 0; k < active.size(); ++k) trial[active[k]] = remaining * s[k];

      // Most violated limit: per-technology headroom or a group headroom.
      double worst = 1.0;
      int kind = 0;  // 1 tech, 2 group
      std::size_t which = 0;
      for (std::size_t t : active) {
        const double room = headroom_[t] - to_gw(t, alloc[t]);
        const double want = to_gw(t, trial[t]);
        if (want > 0.0 && want > room * worst) {
          worst = room > 0.0 ? want / room : kInf;
          kind = 1;
          which = t;
        }
      }
      for (std::size_t g = 0; g < groups.size(); ++g) {
        double want = 0.0;
        for (std::size_t t : groups[g].techs) want += to_gw(t, trial[t]);
        if (want > 0.0 && want > group_room[g] * worst) {
          worst = group_room[g] > 0.0 ? want / group_room[g] : kInf;
          kind = 2;
          which = g;
        }
      }
      if (kind == 0) {
        for (std::size_t t : active) alloc[t] += trial[t];
        remaining = 0.0;
        break;
      }
      std::vector<std::size_t> fixed;
      if (kind == 1) {
        fixed.push_back(which);
      } else {
        for (std::size_t t : groups[which].techs) {
          if (std::find(active.begin(), active.end(), t) != active.end()) fixed.push_back(t);
        }
      }
      const double scale = std::isinf(worst) ? 0.0 : 1.0 / worst;
      for (std::size_t t : fixed) {
        const double add = trial[t] * scale;
        alloc[t] += add;
        remaining -= add;
        for (std::size_t g = 0; g < groups.size(); ++g) {
          if (std::find(groups[g].techs.begin(), groups[g].techs.end(), t) != groups[g].techs.end()) {
            group_room[g] = std::max(0.0, group_room[g] - to_gw(t, add));
          }
        }
      }
      std::erase_if(active, [&](std::size_t t) {
        return std::find(fixed.begin(), fixed.end(), t) != fixed.end();
      });
    }
    if (strict && remaining > 1e-9 * std::max(1.0, amount)) {
      infeasible(fmt::format("{:.6g} EJ cannot be placed within potentials and bounds", remaining));
    }
    return alloc;
  }

  void consume(const std::vector<double>& alloc, bool forced) {
    for (std::size_t t : base_.power_technologies()) {
      if (alloc[t] <= 0.0) continue;
      double gw = alloc[t];
      if (forced) {
        forced_[t] += gw;
      } else {
        gw = ej_to_gw(alloc[t], cf(t));
        r_.new_gw[t] += gw;
        r_.output_ej[t] += alloc[t];
      }
      headroom_[t] = std::max(0.0, headroom_[t] - gw);
      for (auto& g : groups_) {
        if (std::find(g.techs.begin(), g.techs.end(), t) != g.techs.end()) {
          g.headroom_gw = std::max(0.0, g.headroom_gw - gw);
        }
      }
    }
  }

  void apply_group_min() {
    for (const auto& b : m_.bounds(cond_.year)) {
      if (b.kind == TrajectoryKind::Max) continue;
      if (b.kind == TrajectoryKind::Fixed && b.techs.size() == 1) continue;
      const double deficit = b.capacity_gw - group_total(b.techs);
      if (deficit <= 1e-12) continue;
      std::vector<std::size_t> members;
      double room = 0.0;
      for (std::size_t t : b.techs) {
        if (!pinned_[t] && weight_[t] > 0.0) {
          members.push_back(t);
          room += headroom_[t];
        }
      }
      if (members.empty()) {
        infeasible(fmt::format("minimum of {} GW needs new capacity but no member is available",
                               b.capacity_gw));
      }
      if (room < deficit - 1e-9) {
        infeasible(fmt::format("minimum of {} GW exceeds the members' potential", b.capacity_gw));
      }
      consume(water_fill(members, deficit, groups_, true), true);
    }
  }

  void dispatch_existing() {
    double available = 0.0;
    std::vector<double> avail(base_.technologies().size(), 0.0);
    for (std::size_t t : base_.power_technologies()) {
      r_.utilization[t] = existing_utilization(vc_[t], cond_.reference_price, cond_.dispatch_ramp);
      avail[t] = gw_to_ej(r_.existing_gw[t] + forced_[t], cf(t)) * r_.utilization[t];
      available += avail[t];
    }
    double excess = available - demand_;
    if (excess > 0.0) {
      // Curtail from the top of the merit order. Each fleet's output is
      // spread over a narrow variable-cost band so the kept output moves
      // continuously with prices; equal costs are curtailed pro rata.
      auto band = [&](std::size_t t) {
        const double half = std::max(kMeritBand * std::abs(vc_[t]), kMeritBandFloor);
        return std::pair{vc_[t] - half, vc_[t] + half};
      };
      auto kept = [&](double x) {
        double sum = 0.0;
        for (std::size_t t : base_.power_technologies()) {
          const auto [lo, hi] = band(t);
          sum += avail[t] * std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
        }
        return sum;
      };
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t t : base_.power_technologies()) {
        lo = std::min(lo, band(t).first);
        hi = std::max(hi, band(t).second);
      }
      for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        (kept(mid) < demand_ ? lo : hi) = mid;
      }
      const double x = 0.5 * (lo + hi);
      const double scale = demand_ > 0.0 ? demand_ / std::max(kept(x), 1e-300) : 0.0;
      for (std::size_t t : base_.power_technologies()) {
        const auto [blo, bhi] = band(t);
        avail[t] *= std::clamp((x - blo) / (bhi - blo), 0.0, 1.0) * scale;
      }
      r_.curtailed_ej = excess;
      residual_ = 0.0;
    } else {
      residual_ = -excess;
    }
    for (std::size_t t : base_.power_technologies()) {
      r_.output_ej[t] = avail[t];
      r_.new_gw[t] = forced_[t];
    }
  }

  void build_new() {
    if (residual_ <= 0.0) return;
    std::vector<std::size_t> free;
    for (std::size_t t : base_.power_technologies()) {
      if (!pinned_[t] && weight_[t] > 0.0 && headroom_[t] > 0.0) free.push_back(t);
    }
    if (free.empty()) infeasible(fmt::format("{:.6g} EJ of demand and no technology free to build", residual_));
    consume(water_fill(free, residual_, groups_, false), false);
  }

  // Cost of a notional tranche of new capacity, placed like real builds so
  // potentials bind. Falls back to the unconstrained reference mix.
  void price_new_builds() {
    std::vector<std::size_t> free;
    for (std::size_t t : base_.power_technologies()) {
      if (!pinned_[t] && weight_[t] > 0.0) free.push_back(t);
    }
    if (free.empty()) return;
    const double amount = std::max(kNotionalBuild * demand_, 1e-9);
    const auto alloc = water_fill(free, amount, groups_, false, false);
    double placed = 0.0;
    double cost = 0.0;
    for (std::size_t t : free) {
      placed += alloc[t];
      cost += alloc[t] * std::max(r_.levelized_cost[t], kCostFloor);
    }
    if (placed > 0.0) r_.average_new_cost = cost / placed;
  }

  const ConstrainedModel& m_;
  const ModelInstance& base_;
  double demand_;
  std::span<const double> prices_;
  PowerConditions cond_;
  DispatchResult r_;
  std::vector<double> forced_;
  std::vector<double> headroom_;
  std::vector<bool> pinned_;
  std::vector<double> weight_;
  std::vector<double> vc_;
  std::vector<GroupLimit> groups_;
  double residual_ = 0.0;
};

}  // namespace

DispatchResult dispatch_power(const ConstrainedModel& model, double demand_ej,
                              const VintageStock& stock, std::span<const double> prices,
                              const PowerConditions& conditions) {
  if (demand_ej < 0.0 || !std::isfinite(demand_ej)) {
    throw InvalidDataset(fmt::format("electricity demand {} is not a finite non-negative value", demand_ej));
  }
  if (stock.size() != model.base().technologies().size()) {
    throw InvalidDataset("vintage stock does not match the technology list");
  }
  return Dispatcher(model, demand_ej, stock, prices, conditions).run();
}

}  // namespace iam
