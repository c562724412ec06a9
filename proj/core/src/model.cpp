#include "iam/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "iam/choice.hpp"
#include "iam/errors.hpp"

namespace iam {

double gw_to_ej(double gw, double capacity_factor) {
  return gw * capacity_factor * kHoursPerYear * kEjPerGwh;
}

double ej_to_gw(double ej, double capacity_factor) {
  return ej / (capacity_factor * kHoursPerYear * kEjPerGwh);
}

std::size_t ModelInstance::commodity_index(const std::string& id) const {
  auto it = commodity_ids_.find(id);
  if (it == commodity_ids_.end()) {
    throw InvalidDataset(fmt::format("unknown commodity '{}'", id));
  }
  return it->second;
}

std::optional<std::size_t> ModelInstance::find_commodity(const std::string& id) const {
  auto it = commodity_ids_.find(id);
  if (it == commodity_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t ModelInstance::technology_index(const std::string& id) const {
  auto it = tech_ids_.find(id);
  if (it == tech_ids_.end()) {
    throw InvalidDataset(fmt::format("unknown technology '{}'", id));
  }
  return it->second;
}

std::optional<std::size_t> ModelInstance::find_technology(const std::string& id) const {
  auto it = tech_ids_.find(id);
  if (it == tech_ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t ModelInstance::node_index(const std::string& id) const {
  auto it = node_ids_.find(id);
  if (it == node_ids_.end()) {
    throw InvalidDataset(fmt::format("unknown sector node '{}'", id));
  }
  return it->second;
}

std::optional<std::size_t> ModelInstance::resource_of(std::size_t commodity) const {
  return resource_by_commodity_.at(commodity);
}

std::optional<std::size_t> ModelInstance::producer_of(std::size_t commodity) const {
  return producer_by_commodity_.at(commodity);
}

double ModelInstance::variable_cost(std::size_t tech, std::span<const double> prices,
                                    double carbon_price) const {
  const auto& t = techs_[tech];
  double cost = 0.0;
  for (const auto& in : t.inputs) cost += prices[in.commodity] * in.intensity * in.cost_scale;
  cost += carbon_price * ((1.0 - t.spec.capture_fraction) * t.spec.emission_factor -
                          t.biogenic_capture);
  return cost;
}

double ModelInstance::levelized_cost(std::size_t tech, std::span<const double> prices,
                                     double carbon_price, int year, double extra) const {
  const auto& t = techs_[tech];
  return t.spec.non_energy_cost_at(year, data_.grid.base_year()) + extra +
         variable_cost(tech, prices, carbon_price);
}

namespace {

const std::set<std::string> kLedgerSectors = {"power", "industry", "buildings",
                                              "transport", "other"};

std::string fmt_num(double v) { return fmt::format("{:.17g}", v); }

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string canonical_text(const ModelDataset& d) {
  std::string s;
  auto line = [&s](const std::string& l) {
    s += l;
    s += '\n';
  };
  line(fmt::format("grid {} {} {} {}", d.grid.base_year(), d.grid.first_model_year(),
                   d.grid.step(), d.grid.end_year()));
  for (const auto& c : d.commodities) {
    line(fmt::format("commodity {} {} {} {} {} {} {}", c.id, to_string(c.kind), c.unit,
                     c.price_unit, fmt_num(c.price_units_per_quantity), c.is_energy,
                     fmt_num(c.biogenic_carbon)));
  }
  for (const auto& n : d.sectors) {
    std::string demand = "-";
    if (n.demand) {
      demand = fmt::format("{} {} {}", fmt_num(n.demand->base_service),
                           fmt_num(n.demand->income_elasticity),
                           fmt_num(n.demand->price_elasticity));
    }
    line(fmt::format("sector {} {} {} {} {} {} {} {}", n.id, n.parent, n.output,
                     to_string(n.role), n.ledger_sector, fmt_num(n.logit_exponent),
                     fmt_num(n.share_weight), demand));
  }
  for (const auto& t : d.technologies) {
    std::string ins;
    for (const auto& in : t.inputs) ins += fmt::format("{}:{};", in.commodity, fmt_num(in.intensity));
    std::string path;
    for (const auto& a : t.share_weight_path) path += fmt::format("{}:{};", a.year, fmt_num(a.multiplier));
    line(fmt::format("tech {} {} {} [{}] {} {} {} {} {} {} {} {} [{}] {} {} {}", t.id,
                     t.sector, t.output, ins, fmt_num(t.non_energy_cost),
                     fmt_num(t.annual_cost_change), fmt_num(t.emission_factor),
                     fmt_num(t.capture_fraction), t.lifetime, fmt_num(t.capacity_factor),
                     t.first_available_year, fmt_num(t.share_weight), path,
                     t.potential_gw ? fmt_num(*t.potential_gw) : std::string("-"),
                     t.land_class.empty() ? std::string("-") : t.land_class,
                     t.variable_renewable));
  }
  for (const auto& r : d.resources) {
    std::string g;
    for (const auto& gr : r.grades) g += fmt::format("{}@{};", fmt_num(gr.quantity), fmt_num(gr.cost));
    line(fmt::format("resource {} {} {}", r.commodity, r.depletable, g));
  }
  for (const auto& m : d.macro.points) {
    line(fmt::format("macro {} {} {}", m.year, fmt_num(m.population), fmt_num(m.gdp_per_capita)));
  }
  for (const auto& c : d.calibration.shares) line(fmt::format("cal-share {} {}", c.entity, fmt_num(c.share)));
  for (const auto& c : d.calibration.prices) line(fmt::format("cal-price {} {}", c.commodity, fmt_num(c.price)));
  for (const auto& v : d.calibration.vintages) {
    line(fmt::format("cal-vintage {} {} {}", v.technology, v.install_year, fmt_num(v.capacity_gw)));
  }
  for (const auto& h : d.history) line(fmt::format("history {} {} {}", h.technology, h.year, fmt_num(h.capacity_gw)));
  for (const auto& t : d.trajectories) {
    std::string members;
    for (const auto& m : t.technologies) members += m + "|";
    line(fmt::format("trajectory {} {} {} {} {}", t.profile, members, t.year,
                     to_string(t.kind), fmt_num(t.capacity_gw)));
  }
  for (const auto& [k, v] : d.parameters.scalars()) line(fmt::format("param {} {}", k, fmt_num(v)));
  for (const auto& [k, pts] : d.parameters.all_series()) {
    for (const auto& [key, v] : pts) line(fmt::format("param {} {} {}", k, fmt_num(key), fmt_num(v)));
  }
  return s;
}

ModelInstance build_model(ModelDataset dataset) {
  ModelInstance m;
  m.data_ = std::move(dataset);
  auto& d = m.data_;
  // Re-run grid validation; a default-constructed grid is always valid.
  d.grid = TimeGrid(d.grid.base_year(), d.grid.first_model_year(), d.grid.step(),
                    d.grid.end_year());

  // --- commodities
  for (std::size_t i = 0; i < d.commodities.size(); ++i) {
    const auto& c = d.commodities[i];
    if (c.id.empty()) throw InvalidDataset("commodity with empty id");
    if (!m.commodity_ids_.emplace(c.id, i).second) {
      throw InvalidDataset(fmt::format("duplicate commodity '{}'", c.id));
    }
    if (!(c.price_units_per_quantity > 0.0)) {
      throw InvalidDataset(fmt::format("commodity '{}' has non-positive unit scale", c.id));
    }
    if (c.biogenic_carbon < 0.0) {
      throw InvalidDataset(fmt::format("commodity '{}' has negative biogenic carbon", c.id));
    }
  }
  const std::size_t nc = d.commodities.size();
  for (const auto& c : d.commodities) {
    if (c.kind == CommodityKind::StorageResource) {
      if (m.storage_) throw InvalidDataset("more than one storage-resource commodity");
      m.storage_ = m.commodity_ids_.at(c.id);
    }
    if (c.biogenic_carbon > 0.0) m.biomass_ = m.commodity_ids_.at(c.id);
  }

  // --- sector trees
  for (std::size_t i = 0; i < d.sectors.size(); ++i) {
    const auto& n = d.sectors[i];
    if (!m.node_ids_.emplace(n.id, i).second) {
      throw InvalidDataset(fmt::format("duplicate sector node '{}'", n.id));
    }
    if (!(n.logit_exponent < 0.0)) {
      throw InvalidDataset(fmt::format("sector '{}' logit exponent {} must be negative",
                                       n.id, n.logit_exponent));
    }
    if (n.share_weight < 0.0) {
      throw InvalidDataset(fmt::format("sector '{}' has negative share weight", n.id));
    }
  }
  m.nodes_.resize(d.sectors.size());
  for (std::size_t i = 0; i < d.sectors.size(); ++i) {
    auto& rec = m.nodes_[i];
    rec.spec = d.sectors[i];
    rec.base_weight = rec.spec.share_weight;
    if (!rec.spec.parent.empty()) {
      auto it = m.node_ids_.find(rec.spec.parent);
      if (it == m.node_ids_.end()) {
        throw InvalidDataset(fmt::format("sector '{}' has unknown parent '{}'",
                                         rec.spec.id, rec.spec.parent));
      }
      rec.parent = it->second;
    }
  }
  for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
    // Walk to the root; a walk longer than the node count means a cycle.
    std::size_t cur = i;
    std::size_t steps = 0;
    while (m.nodes_[cur].parent) {
      cur = *m.nodes_[cur].parent;
      if (++steps > m.nodes_.size()) {
        throw InvalidDataset(fmt::format("sector tree containing '{}' has a cycle",
                                         m.nodes_[i].spec.id));
      }
    }
    m.nodes_[i].root = cur;
    if (m.nodes_[i].parent) m.nodes_[*m.nodes_[i].parent].child_nodes.push_back(i);
  }
  m.producer_by_commodity_.assign(nc, std::nullopt);
  bool have_power = false;
  for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
    auto& rec = m.nodes_[i];
    const auto& root = m.nodes_[rec.root].spec;
    if (rec.parent) {
      if (rec.spec.role != root.role) {
        throw InvalidDataset(fmt::format("sector '{}' role differs from its root '{}'",
                                         rec.spec.id, root.id));
      }
      if (rec.spec.demand) {
        throw InvalidDataset(fmt::format("sector '{}' carries demand but is not a root", rec.spec.id));
      }
      continue;
    }
    m.roots_.push_back(i);
    if (!kLedgerSectors.contains(rec.spec.ledger_sector)) {
      throw InvalidDataset(fmt::format("sector '{}' has unknown ledger sector '{}'",
                                       rec.spec.id, rec.spec.ledger_sector));
    }
    auto out = m.commodity_ids_.find(rec.spec.output);
    if (out == m.commodity_ids_.end()) {
      throw DanglingCommodity(fmt::format("sector '{}' outputs undeclared commodity '{}'",
                                          rec.spec.id, rec.spec.output));
    }
    if (m.producer_by_commodity_[out->second]) {
      throw InvalidDataset(fmt::format("commodity '{}' produced by more than one sector",
                                       rec.spec.output));
    }
    m.producer_by_commodity_[out->second] = i;
    if (rec.spec.role == SectorRole::EndUse) {
      if (!rec.spec.demand) {
        throw InvalidDataset(fmt::format("end-use sector '{}' lacks a demand specification", rec.spec.id));
      }
      if (rec.spec.demand->price_elasticity > 0.0) {
        throw InvalidDataset(fmt::format("sector '{}' price elasticity must be <= 0", rec.spec.id));
      }
      if (!(rec.spec.demand->base_service > 0.0)) {
        throw InvalidDataset(fmt::format("sector '{}' base service must be positive", rec.spec.id));
      }
    } else if (rec.spec.demand) {
      throw InvalidDataset(fmt::format("non end-use sector '{}' carries demand", rec.spec.id));
    }
    if (rec.spec.role == SectorRole::Power) {
      if (have_power) throw InvalidDataset("more than one power sector");
      have_power = true;
      m.power_root_ = i;
    }
    if (rec.spec.role == SectorRole::Removal) {
      if (m.removal_root_) throw InvalidDataset("more than one removal sector");
      m.removal_root_ = i;
    }
  }
  if (!have_power) throw InvalidDataset("dataset has no power sector");
  for (auto& rec : m.nodes_) rec.output = m.commodity_ids_.at(m.nodes_[rec.root].spec.output);

  // --- technologies
  const int step = d.grid.step();
  m.techs_.resize(d.technologies.size());
  for (std::size_t i = 0; i < d.technologies.size(); ++i) {
    const auto& t = d.technologies[i];
    auto& rec = m.techs_[i];
    rec.spec = t;
    if (!m.tech_ids_.emplace(t.id, i).second) {
      throw InvalidDataset(fmt::format("duplicate technology '{}'", t.id));
    }
    auto node = m.node_ids_.find(t.sector);
    if (node == m.node_ids_.end()) {
      throw InvalidDataset(fmt::format("technology '{}' names unknown sector '{}'", t.id, t.sector));
    }
    rec.node = node->second;
    rec.root = m.nodes_[rec.node].root;
    rec.output = m.nodes_[rec.node].output;
    if (t.output != m.commodity(rec.output).id) {
      throw InvalidDataset(fmt::format("technology '{}' outputs '{}' but its sector produces '{}'",
                                       t.id, t.output, m.commodity(rec.output).id));
    }
    m.nodes_[rec.node].technologies.push_back(i);
    const double out_scale = m.commodity(rec.output).price_units_per_quantity;
    double bio = 0.0;
    for (const auto& in : t.inputs) {
      auto c = m.commodity_ids_.find(in.commodity);
      if (c == m.commodity_ids_.end()) {
        throw DanglingCommodity(fmt::format("technology '{}' consumes undeclared commodity '{}'",
                                            t.id, in.commodity));
      }
      if (!(in.intensity > 0.0) || !std::isfinite(in.intensity)) {
        throw NonPositiveIntensity(fmt::format("technology '{}' input '{}' intensity {}",
                                               t.id, in.commodity, in.intensity));
      }
      ResolvedInput r;
      r.commodity = c->second;
      r.intensity = in.intensity;
      r.cost_scale = m.commodity(c->second).price_units_per_quantity / out_scale;
      bio += in.intensity * r.cost_scale * m.commodity(c->second).biogenic_carbon;
      if (m.storage_ && c->second == *m.storage_) rec.storage_input = rec.inputs.size();
      rec.inputs.push_back(r);
    }
    if (t.capture_fraction < 0.0 || t.capture_fraction > 1.0) {
      throw InvalidDataset(fmt::format("technology '{}' capture fraction {} outside [0,1]",
                                       t.id, t.capture_fraction));
    }
    if (t.emission_factor < 0.0) {
      throw InvalidDataset(fmt::format("technology '{}' has negative emission factor", t.id));
    }
    if (t.lifetime < step) {
      throw InvalidDataset(fmt::format("technology '{}' lifetime {} shorter than step {}",
                                       t.id, t.lifetime, step));
    }
    if (!(t.capacity_factor > 0.0 && t.capacity_factor <= 1.0)) {
      throw InvalidDataset(fmt::format("technology '{}' capacity factor {} outside (0,1]",
                                       t.id, t.capacity_factor));
    }
    if (t.share_weight < 0.0) {
      throw InvalidDataset(fmt::format("technology '{}' has negative share weight", t.id));
    }
    for (const auto& a : t.share_weight_path) {
      if (a.multiplier < 0.0) {
        throw InvalidDataset(fmt::format("technology '{}' share-weight multiplier is negative", t.id));
      }
    }
    if (t.potential_gw && *t.potential_gw < 0.0) {
      throw InvalidDataset(fmt::format("technology '{}' has negative potential", t.id));
    }
    rec.biogenic_capture = t.capture_fraction * bio;
    rec.mt_per_emission_unit = out_scale / 1e6;
    const bool removal = m.nodes_[rec.root].spec.role == SectorRole::Removal;
    if (t.capture_fraction > 0.0 && !removal) {
      if (!rec.storage_input) {
        throw InvalidDataset(fmt::format("technology '{}' captures CO2 but has no storage input", t.id));
      }
      // Stored tonnes per output price unit must equal captured tonnes.
      const auto& st = rec.inputs[*rec.storage_input];
      const double stored_t = st.intensity * st.cost_scale;
      const double captured_t = t.capture_fraction * (t.emission_factor + bio);
      if (!close_rel(stored_t, captured_t, 1e-6)) {
        throw InvalidDataset(fmt::format(
            "technology '{}' storage intensity stores {} t per unit but captures {} t",
            t.id, stored_t, captured_t));
      }
    } else if (rec.storage_input && !removal) {
      throw InvalidDataset(fmt::format("technology '{}' consumes storage without capture", t.id));
    }
    if (m.nodes_[rec.root].spec.role == SectorRole::Power) m.power_techs_.push_back(i);
  }
  std::sort(m.power_techs_.begin(), m.power_techs_.end(), [&](std::size_t a, std::size_t b) {
    return m.techs_[a].spec.id < m.techs_[b].spec.id;
  });
  for (std::size_t i = 0; i < m.nodes_.size(); ++i) {
    const auto& n = m.nodes_[i];
    if (n.technologies.empty() && n.child_nodes.empty()) {
      throw InvalidDataset(fmt::format("sector '{}' has no technologies", n.spec.id));
    }
  }

  // --- resources
  m.resource_by_commodity_.assign(nc, std::nullopt);
  for (std::size_t i = 0; i < d.resources.size(); ++i) {
    const auto& r = d.resources[i];
    auto c = m.commodity_ids_.find(r.commodity);
    if (c == m.commodity_ids_.end()) {
      throw DanglingCommodity(fmt::format("resource names undeclared commodity '{}'", r.commodity));
    }
    const auto kind = m.commodity(c->second).kind;
    if (kind != CommodityKind::PrimaryResource && kind != CommodityKind::StorageResource) {
      throw InvalidDataset(fmt::format("resource '{}' is not a primary or storage resource", r.commodity));
    }
    if (m.resource_by_commodity_[c->second]) {
      throw InvalidDataset(fmt::format("resource '{}' declared twice", r.commodity));
    }
    if (r.grades.empty()) throw InvalidDataset(fmt::format("resource '{}' has no grades", r.commodity));
    for (std::size_t g = 0; g < r.grades.size(); ++g) {
      if (!(r.grades[g].quantity > 0.0)) {
        throw InvalidDataset(fmt::format("resource '{}' grade {} quantity must be positive", r.commodity, g));
      }
      if (!(r.grades[g].cost > 0.0)) {
        throw InvalidDataset(fmt::format("resource '{}' grade {} cost must be positive", r.commodity, g));
      }
      if (g > 0 && !(r.grades[g].cost > r.grades[g - 1].cost)) {
        throw InvalidDataset(fmt::format("resource '{}' grade costs must strictly increase", r.commodity));
      }
    }
    m.resource_by_commodity_[c->second] = i;
  }

  // --- every consumed commodity needs a producer
  for (const auto& t : m.techs_) {
    for (const auto& in : t.inputs) {
      if (!m.producer_by_commodity_[in.commodity] && !m.resource_by_commodity_[in.commodity]) {
        throw DanglingCommodity(fmt::format("technology '{}' consumes '{}' which nothing supplies",
                                            t.spec.id, m.commodity(in.commodity).id));
      }
      const auto prod = m.producer_by_commodity_[in.commodity];
      if (prod && m.nodes_[*prod].spec.role == SectorRole::EndUse) {
        throw InvalidDataset(fmt::format("technology '{}' consumes end-use service '{}'",
                                         t.spec.id, m.commodity(in.commodity).id));
      }
      // Supply ordering: power draws only on resources; conversions only on
      // resources and power.
      const auto role = m.nodes_[t.root].spec.role;
      if (prod && role == SectorRole::Power) {
        throw InvalidDataset(fmt::format("power technology '{}' consumes produced carrier '{}'",
                                         t.spec.id, m.commodity(in.commodity).id));
      }
      if (prod && role == SectorRole::Conversion &&
          m.nodes_[*prod].spec.role != SectorRole::Power) {
        throw InvalidDataset(fmt::format("conversion technology '{}' consumes '{}' from a non-power sector",
                                         t.spec.id, m.commodity(in.commodity).id));
      }
    }
  }

  // --- macro drivers
  {
    std::set<int> seen;
    for (const auto& p : d.macro.points) {
      if (!seen.insert(p.year).second) {
        throw InvalidDataset(fmt::format("macro year {} appears twice", p.year));
      }
      if (!(p.population > 0.0) || !(p.gdp_per_capita > 0.0)) {
        throw InvalidDataset(fmt::format("macro drivers must be positive (year {})", p.year));
      }
    }
    if (!seen.contains(d.grid.base_year())) {
      throw InvalidDataset(fmt::format("macro drivers missing base year {}", d.grid.base_year()));
    }
    for (int y : d.grid.years()) {
      if (!seen.contains(y)) throw InvalidDataset(fmt::format("macro drivers missing year {}", y));
    }
  }

  // --- calibration prices
  m.base_prices_.assign(nc, 0.0);
  {
    std::vector<bool> priced(nc, false);
    for (const auto& p : d.calibration.prices) {
      auto c = m.commodity_ids_.find(p.commodity);
      if (c == m.commodity_ids_.end()) {
        throw DanglingCommodity(fmt::format("calibration price for undeclared commodity '{}'", p.commodity));
      }
      if (!(p.price > 0.0)) {
        throw InvalidDataset(fmt::format("calibration price for '{}' must be positive", p.commodity));
      }
      m.base_prices_[c->second] = p.price;
      priced[c->second] = true;
    }
    for (std::size_t i = 0; i < nc; ++i) {
      const auto kind = m.commodity(i).kind;
      const bool traded = kind == CommodityKind::PrimaryResource ||
                          kind == CommodityKind::SecondaryCarrier ||
                          kind == CommodityKind::StorageResource;
      if (traded && !priced[i]) {
        throw InvalidDataset(fmt::format("no base-year price for commodity '{}'", m.commodity(i).id));
      }
    }
  }

  // --- share-weight calibration, bottom-up through each nest
  std::map<std::size_t, std::vector<std::pair<std::string, double>>> observed;  // nest -> entries
  for (const auto& s : d.calibration.shares) {
    std::optional<std::size_t> nest;
    if (auto t = m.tech_ids_.find(s.entity); t != m.tech_ids_.end()) {
      nest = m.techs_[t->second].node;
    } else if (auto n = m.node_ids_.find(s.entity); n != m.node_ids_.end()) {
      if (!m.nodes_[n->second].parent) {
        throw InvalidDataset(fmt::format("calibration share for root sector '{}'", s.entity));
      }
      nest = *m.nodes_[n->second].parent;
    } else {
      throw InvalidDataset(fmt::format("calibration share for unknown entity '{}'", s.entity));
    }
    observed[*nest].emplace_back(s.entity, s.share);
  }
  const int base_year = d.grid.base_year();
  std::vector<double> node_cost(m.nodes_.size(), 0.0);
  std::function<void(std::size_t)> calibrate = [&](std::size_t ni) {
    auto& node = m.nodes_[ni];
    for (std::size_t c : node.child_nodes) calibrate(c);
    std::vector<std::string> ids;
    std::vector<double> costs;
    for (std::size_t c : node.child_nodes) {
      ids.push_back(m.nodes_[c].spec.id);
      costs.push_back(node_cost[c]);
    }
    for (std::size_t t : node.technologies) {
      ids.push_back(m.techs_[t].spec.id);
      costs.push_back(m.levelized_cost(t, m.base_prices_, 0.0, base_year));
    }
    std::vector<double> weights(ids.size(), 0.0);
    if (auto it = observed.find(ni); it != observed.end()) {
      std::vector<double> shares(ids.size(), -1.0);
      for (const auto& [entity, share] : it->second) {
        auto pos = std::find(ids.begin(), ids.end(), entity);
        if (shares[pos - ids.begin()] >= 0.0) {
          throw InvalidDataset(fmt::format("calibration share for '{}' given twice", entity));
        }
        shares[pos - ids.begin()] = share;
      }
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (shares[k] < 0.0) {
          throw BadSharesSum(fmt::format("nest '{}' calibration omits member '{}'",
                                         node.spec.id, ids[k]));
        }
      }
      try {
        weights = calibrate_share_weights(shares, costs, node.spec.logit_exponent);
      } catch (const BadSharesSum& e) {
        throw BadSharesSum(fmt::format("nest '{}': {}", node.spec.id, e.what()));
      }
      // Rescale so the nest price equals the observed average cost; the
      // parent then compares this nest on a cost scale.
      double avg = 0.0;
      for (std::size_t j = 0; j < shares.size(); ++j) avg += shares[j] * std::max(costs[j], kCostFloor);
      const double scale = std::pow(avg / nest_price(costs, weights, node.spec.logit_exponent),
                                    node.spec.logit_exponent);
      for (double& w : weights) w *= scale;
    } else {
      std::size_t k = 0;
      for (std::size_t c : node.child_nodes) weights[k++] = m.nodes_[c].spec.share_weight;
      for (std::size_t t : node.technologies) weights[k++] = m.techs_[t].spec.share_weight;
    }
    std::size_t k = 0;
    for (std::size_t c : node.child_nodes) m.nodes_[c].base_weight = weights[k++];
    for (std::size_t t : node.technologies) m.techs_[t].base_weight = weights[k++];
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) {
      throw InvalidDataset(fmt::format("nest '{}' has no competitor with positive weight", node.spec.id));
    }
    // Base-year prices only see competitors available in the base year.
    std::vector<double> live = weights;
    k = node.child_nodes.size();
    for (std::size_t t : node.technologies) {
      const auto& spec = m.techs_[t].spec;
      if (spec.first_available_year > base_year) {
        live[k] = 0.0;
      } else {
        live[k] *= spec.share_weight_multiplier(base_year);
      }
      ++k;
    }
    if (std::all_of(live.begin(), live.end(), [](double w) { return w == 0.0; })) live = weights;
    node_cost[ni] = nest_price(costs, live, node.spec.logit_exponent);
    if (!node.parent) {
      // Service price: share-weighted average cost at base prices.
      const auto shares = logit_shares(costs, live, node.spec.logit_exponent);
      double avg = 0.0;
      for (std::size_t j = 0; j < shares.size(); ++j) avg += shares[j] * std::max(costs[j], kCostFloor);
      node.base_service_price = avg;
    }
  };
  for (std::size_t r : m.roots_) calibrate(r);

  // --- calibration vintages, history, trajectories
  for (const auto& v : d.calibration.vintages) {
    auto t = m.tech_ids_.find(v.technology);
    if (t == m.tech_ids_.end() ||
        m.nodes_[m.techs_[t->second].root].spec.role != SectorRole::Power) {
      throw InvalidDataset(fmt::format("initial vintage for non-power technology '{}'", v.technology));
    }
    if (v.capacity_gw < 0.0 || v.install_year > base_year) {
      throw InvalidDataset(fmt::format("initial vintage '{}' {} invalid", v.technology, v.install_year));
    }
  }
  for (const auto& h : d.history) {
    if (!m.tech_ids_.contains(h.technology)) {
      throw InvalidDataset(fmt::format("history for unknown technology '{}'", h.technology));
    }
    if (h.capacity_gw < 0.0) {
      throw InvalidDataset(fmt::format("history capacity for '{}' is negative", h.technology));
    }
  }
  for (const auto& tr : d.trajectories) {
    if (tr.technologies.empty()) throw InvalidDataset("trajectory with no technologies");
    for (const auto& id : tr.technologies) {
      auto t = m.tech_ids_.find(id);
      if (t == m.tech_ids_.end() ||
          m.nodes_[m.techs_[t->second].root].spec.role != SectorRole::Power) {
        throw InvalidDataset(fmt::format("trajectory '{}' names non-power technology '{}'", tr.profile, id));
      }
    }
    // Entries past a shortened horizon are ignored; gaps inside it are errors.
    if (tr.year <= d.grid.end_year() && !d.grid.contains(tr.year)) {
      throw InvalidDataset(fmt::format("trajectory '{}' year {} is not a model period", tr.profile, tr.year));
    }
    if (tr.capacity_gw < 0.0) {
      throw InvalidDataset(fmt::format("trajectory '{}' has negative capacity", tr.profile));
    }
  }

  // --- required parameters
  for (const char* name : {"nonco2_base_mt", "nonco2_final_fraction", "nonco2_final_year",
                           "dispatch_ramp", "storage_reference_cost",
                           "history_last_year", "seoul_area_km2"}) {
    d.parameters.scalar(name);
  }
  for (const char* name : {"lulucf_sink_mt", "integration_cost"}) d.parameters.points(name);
  if (m.removal_root_) d.parameters.points("removal_capacity_mt");

  m.checksum_ = sha256_hex(canonical_text(d));
  return m;
}

}  // namespace iam
