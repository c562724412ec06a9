#include "iam/io.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "iam/csv.hpp"
#include "iam/errors.hpp"

namespace iam {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const CsvTable& t, std::size_t row, std::string_view column,
                    const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  t.fail(row, column, fmt::format("'{}' is not a number", text));
}

// "a:1;b:2" pairs.
std::vector<std::pair<std::string, double>> parse_pairs(const CsvTable& t, std::size_t row,
                                                        std::string_view column) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& item : split(t.text(row, column), ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0) {
      t.fail(row, column, fmt::format("'{}' is not name:value", item));
    }
    out.emplace_back(item.substr(0, colon), parse_double(t, row, column, item.substr(colon + 1)));
  }
  return out;
}

TimeGrid read_grid(const Parameters& p) {
  auto get = [&](const char* name) {
    if (!p.has(name)) throw InvalidDataset(fmt::format("parameters.csv lacks '{}'", name));
    return static_cast<int>(p.scalar(name));
  };
  return TimeGrid(get("grid_base_year"), get("grid_first_model_year"), get("grid_step"),
                  get("grid_end_year"));
}

}  // namespace

ModelDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw MissingTable(fmt::format("dataset directory '{}' does not exist", dir.string()));
  }
  ModelDataset d;

  {
    auto t = CsvTable::read(dir / "parameters.csv", {"name", "key", "value"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto name = t.required_text(r, "name");
      const double value = t.number(r, "value");
      if (auto key = t.optional_number(r, "key")) {
        d.parameters.set_point(name, *key, value);
      } else {
        if (d.parameters.has(name)) t.fail(r, "name", fmt::format("'{}' defined twice", name));
        d.parameters.set_scalar(name, value);
      }
    }
    d.grid = read_grid(d.parameters);
  }

  {
    auto t = CsvTable::read(dir / "commodities.csv",
                            {"id", "kind", "unit", "price_unit", "price_units_per_quantity"},
                            {"is_energy", "biogenic_carbon"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      Commodity c;
      c.id = t.required_text(r, "id");
      auto kind = parse_commodity_kind(t.required_text(r, "kind"));
      if (!kind) t.fail(r, "kind", fmt::format("unknown kind '{}'", t.text(r, "kind")));
      c.kind = *kind;
      c.unit = t.required_text(r, "unit");
      c.price_unit = t.required_text(r, "price_unit");
      c.price_units_per_quantity = t.number(r, "price_units_per_quantity");
      c.is_energy = t.boolean(r, "is_energy");
      c.biogenic_carbon = t.optional_number(r, "biogenic_carbon").value_or(0.0);
      d.commodities.push_back(std::move(c));
    }
  }

  {
    auto t = CsvTable::read(dir / "sectors.csv",
                            {"id", "parent", "output", "role", "ledger_sector", "logit_exponent"},
                            {"share_weight", "base_service", "income_elasticity", "price_elasticity"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      SectorNode n;
      n.id = t.required_text(r, "id");
      n.parent = t.text(r, "parent");
      n.output = t.text(r, "output");
      auto role = parse_sector_role(t.required_text(r, "role"));
      if (!role) t.fail(r, "role", fmt::format("unknown role '{}'", t.text(r, "role")));
      n.role = *role;
      n.ledger_sector = t.text(r, "ledger_sector");
      n.logit_exponent = t.number(r, "logit_exponent");
      n.share_weight = t.optional_number(r, "share_weight").value_or(1.0);
      if (n.parent.empty() && n.output.empty()) t.fail(r, "output", "root sector needs an output");
      if (auto base = t.optional_number(r, "base_service")) {
        n.demand = DemandSpec{*base, t.number(r, "income_elasticity"), t.number(r, "price_elasticity")};
      }
      d.sectors.push_back(std::move(n));
    }
  }

  {
    auto t = CsvTable::read(
        dir / "technologies.csv",
        {"id", "sector", "output", "inputs", "non_energy_cost", "emission_factor",
         "capture_fraction", "lifetime", "capacity_factor", "first_available_year"},
        {"annual_cost_change", "share_weight", "share_weight_path", "potential_gw", "land_class",
         "variable_renewable"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      Technology x;
      x.id = t.required_text(r, "id");
      x.sector = t.required_text(r, "sector");
      x.output = t.required_text(r, "output");
      for (auto& [c, v] : parse_pairs(t, r, "inputs")) x.inputs.push_back({c, v});
      x.non_energy_cost = t.number(r, "non_energy_cost");
      x.annual_cost_change = t.optional_number(r, "annual_cost_change").value_or(0.0);
      x.emission_factor = t.number(r, "emission_factor");
      x.capture_fraction = t.number(r, "capture_fraction");
      x.lifetime = t.integer(r, "lifetime");
      x.capacity_factor = t.number(r, "capacity_factor");
      x.first_available_year = t.integer(r, "first_available_year");
      x.share_weight = t.optional_number(r, "share_weight").value_or(1.0);
      for (auto& [y, v] : parse_pairs(t, r, "share_weight_path")) {
        x.share_weight_path.push_back({static_cast<int>(parse_double(t, r, "share_weight_path", y)), v});
      }
      x.potential_gw = t.optional_number(r, "potential_gw");
      x.land_class = t.text(r, "land_class");
      x.variable_renewable = t.boolean(r, "variable_renewable");
      d.technologies.push_back(std::move(x));
    }
  }

  {
    auto t = CsvTable::read(dir / "resources.csv", {"commodity", "grade", "quantity", "cost"},
                            {"depletable"});
    std::map<std::string, std::vector<std::pair<int, Grade>>> grades;
    std::map<std::string, bool> depletable;
    std::vector<std::string> order;
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto c = t.required_text(r, "commodity");
      const bool dep = t.boolean(r, "depletable");
      if (!grades.contains(c)) {
        order.push_back(c);
        depletable[c] = dep;
      } else if (depletable[c] != dep) {
        t.fail(r, "depletable", fmt::format("'{}' mixes depletable and renewable grades", c));
      }
      const int g = t.integer(r, "grade");
      for (const auto& [existing, _] : grades[c]) {
        if (existing == g) t.fail(r, "grade", fmt::format("grade {} of '{}' repeated", g, c));
      }
      grades[c].push_back({g, Grade{t.number(r, "quantity"), t.number(r, "cost")}});
    }
    for (const auto& c : order) {
      auto& list = grades[c];
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      GradedResource res;
      res.commodity = c;
      res.depletable = depletable[c];
      for (const auto& [_, g] : list) res.grades.push_back(g);
      d.resources.push_back(std::move(res));
    }
  }

  {
    auto t = CsvTable::read(dir / "macro.csv", {"year", "population", "gdp_per_capita"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      d.macro.points.push_back({t.integer(r, "year"), t.number(r, "population"),
                                t.number(r, "gdp_per_capita")});
    }
  }

  {
    auto t = CsvTable::read(dir / "calibration.csv", {"kind", "entity", "year", "value"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto kind = t.required_text(r, "kind");
      const auto entity = t.required_text(r, "entity");
      const int year = t.integer(r, "year");
      const double value = t.number(r, "value");
      if (kind == "share" || kind == "price") {
        if (year != d.grid.base_year()) {
          t.fail(r, "year", fmt::format("{} observations must be for base year {}", kind, d.grid.base_year()));
        }
        if (kind == "share") {
          d.calibration.shares.push_back({entity, value});
        } else {
          d.calibration.prices.push_back({entity, value});
        }
      } else if (kind == "vintage") {
        d.calibration.vintages.push_back({entity, year, value});
      } else {
        t.fail(r, "kind", fmt::format("unknown calibration kind '{}'", kind));
      }
    }
  }

  {
    auto t = CsvTable::read(dir / "history.csv", {"technology", "year", "capacity_gw"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      d.history.push_back({t.required_text(r, "technology"), t.integer(r, "year"),
                           t.number(r, "capacity_gw")});
    }
  }

  {
    auto t = CsvTable::read(dir / "trajectories.csv",
                            {"profile", "technologies", "year", "kind", "capacity_gw"});
    for (std::size_t r = 0; r < t.size(); ++r) {
      TrajectoryRow row;
      row.profile = t.required_text(r, "profile");
      row.technologies = split(t.required_text(r, "technologies"), '|');
      row.year = t.integer(r, "year");
      auto kind = parse_trajectory_kind(t.required_text(r, "kind"));
      if (!kind) t.fail(r, "kind", fmt::format("unknown trajectory kind '{}'", t.text(r, "kind")));
      row.kind = *kind;
      row.capacity_gw = t.number(r, "capacity_gw");
      d.trajectories.push_back(std::move(row));
    }
  }
  return d;
}

}  // namespace iam
