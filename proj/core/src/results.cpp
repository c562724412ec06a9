#include "iam/results.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "iam/csv.hpp"
#include "iam/errors.hpp"

#ifndef IAM_VERSION
#define IAM_VERSION "0.0.0"
#endif

namespace iam {

namespace fs = std::filesystem;

std::string_view tool_version() { return IAM_VERSION; }

namespace {

std::string num(double v) {
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.10g}", v);
}

class Table {
 public:
  explicit Table(std::string header) : out_(std::move(header)) { out_ += '\n'; }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ += (first ? "" : ","), out_ += cell(cells), first = false), ...);
    out_ += '\n';
  }
  std::string str() && { return std::move(out_); }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::string_view s) { return csv_field(s); }
  static std::string cell(const std::string& s) { return csv_field(s); }
  static std::string cell(const char* s) { return csv_field(s); }
  std::string out_;
};

}  // namespace

ScenarioRun run_scenario(const ModelInstance& instance, const ScenarioConfig& scenario,
                         int policy_cost_samples) {
  const auto model = apply_scenario(instance, scenario);
  ScenarioRun r;
  r.run = run_horizon(model);
  r.run.provenance = {instance.checksum(), sha256_hex(serialize(scenario)), std::string(tool_version())};
  r.feasibility = assess_feasibility(model, r.run, policy_cost_samples);
  return r;
}

std::string emissions_csv(const ModelInstance& instance, const RunResult& run) {
  (void)instance;
  Table t("period,sector,gross_mtco2,captured_mtco2,removal_dac_mtco2,removal_beccs_mtco2,"
          "removal_lulucf_mtco2,nonco2_mtco2e,net_mtco2e");
  for (const auto& p : run.periods) {
    const auto& l = p.ledger;
    const std::size_t other = ledger_sector_index("other");
    for (std::size_t s = 0; s < kLedgerSectors.size(); ++s) {
      const auto& e = l.sectors[s];
      const double wedge = s == other ? l.nonco2_mt : 0.0;
      t.row(l.year, kLedgerSectors[s], e.gross_mt, e.captured_mt, e.dac_mt, e.beccs_mt, e.lulucf_mt,
            wedge, e.gross_mt - e.dac_mt - e.beccs_mt - e.lulucf_mt + wedge);
    }
    t.row(l.year, "total", l.gross_mt(), l.captured_mt(), l.dac_mt(), l.beccs_mt(), l.lulucf_mt(),
          l.nonco2_mt, l.net_mt());
  }
  return std::move(t).str();
}

std::string generation_csv(const ModelInstance& instance, const RunResult& run) {
  Table t("period,technology,generation_twh,share_fraction");
  for (const auto& p : run.periods) {
    const double total = power_generation_twh(p.solution, instance);
    for (std::size_t tech : instance.power_technologies()) {
      const double twh = p.solution.tech_output[tech] * kTwhPerEj;
      t.row(p.solution.year, instance.technology(tech).spec.id, twh, total > 0.0 ? twh / total : 0.0);
    }
    t.row(p.solution.year, "total", total, total > 0.0 ? 1.0 : 0.0);
  }
  return std::move(t).str();
}

std::string final_energy_csv(const ModelInstance& instance, const RunResult& run) {
  Table t("period,sector,carrier,final_energy_ej");
  for (const auto& p : run.periods) {
    std::map<std::pair<std::string, std::string>, double> use;
    for (std::size_t tech = 0; tech < instance.technologies().size(); ++tech) {
      const auto& rec = instance.technology(tech);
      const auto& root = instance.nodes()[rec.root].spec;
      if (root.role != SectorRole::EndUse) continue;
      for (const auto& in : rec.inputs) {
        const auto& c = instance.commodity(in.commodity);
        if (!c.is_energy) continue;
        use[{root.ledger_sector, c.id}] += p.solution.tech_output[tech] * in.intensity;
      }
    }
    for (const auto& [key, ej] : use) t.row(p.solution.year, key.first, key.second, ej);
  }
  return std::move(t).str();
}

std::string capacity_csv(const ModelInstance& instance, const RunResult& run) {
  Table t("period,technology,capacity_gw,new_capacity_gw");
  for (const auto& p : run.periods) {
    for (std::size_t tech : instance.power_technologies()) {
      t.row(p.solution.year, instance.technology(tech).spec.id, p.solution.capacity_gw[tech],
            p.solution.new_capacity_gw[tech]);
    }
  }
  return std::move(t).str();
}

std::string prices_csv(const ModelInstance& instance, const RunResult& run) {
  Table t("period,commodity,unit,price_usd_per_unit");
  for (const auto& p : run.periods) {
    for (std::size_t c = 0; c < instance.commodity_count(); ++c) {
      const auto& com = instance.commodity(c);
      t.row(p.solution.year, com.id, com.price_unit, p.solution.prices[c]);
    }
    t.row(p.solution.year, "carbon", "tCO2", p.carbon_price);
  }
  return std::move(t).str();
}

std::string feasibility_csv(const ModelInstance& instance, const ScenarioRun& result) {
  const auto& run = result.run;
  const auto& f = result.feasibility;
  Table t("period,metric,value,unit");
  for (std::size_t i = 0; i < run.periods.size(); ++i) {
    const auto& p = run.periods[i];
    const int y = p.solution.year;
    const auto& l = p.ledger;
    t.row(y, "net_emissions", l.net_mt(), "MtCO2e");
    t.row(y, "carbon_price", p.carbon_price, "USD_per_tCO2");
    if (p.cap_mt) t.row(y, "emission_cap", *p.cap_mt, "MtCO2e");
    if (!f.policy_cost_pct.empty()) t.row(y, "policy_cost", f.policy_cost_pct[i], "pct_GDP");
    const double gen = power_generation_twh(p.solution, instance);
    t.row(y, "generation_total", gen, "TWh");
    if (gen > 0.0) t.row(y, "carbon_intensity_power", carbon_intensity_power(l, gen), "gCO2_per_kWh");
    for (const char* s : {"industry", "buildings", "transport"}) {
      try {
        t.row(y, fmt::format("electrification_{}", s), electrification_share(p.solution, instance, s), "fraction");
      } catch (const EmptySector&) {
      }
    }
    if (l.negative_mt() > 0.0) {
      const auto n = nets_breakdown(l);
      t.row(y, "nets_share_dac", n.dac, "fraction");
      t.row(y, "nets_share_beccs", n.beccs, "fraction");
      t.row(y, "nets_share_lulucf", n.lulucf, "fraction");
    }
    t.row(y, "storage_captured", l.captured_mt(), "MtCO2_per_yr");
    t.row(y, "storage_cumulative", f.storage.cumulative_gt[i], "GtCO2");
    if (f.storage.crossed_domestic == y) t.row(y, "storage_budget_domestic_crossed", y, "year");
    if (f.storage.crossed_overseas == y) t.row(y, "storage_budget_overseas_crossed", y, "year");
    for (const auto& [cls, km2] : f.land_km2) {
      t.row(y, fmt::format("land_{}", cls), km2[i], "km2");
      t.row(y, fmt::format("land_{}_seoul", cls), seoul_multiple(km2[i]), "seoul_areas");
    }
    for (std::size_t tech : instance.power_technologies()) {
      t.row(y, fmt::format("capacity_{}", instance.technology(tech).spec.id),
            p.solution.capacity_gw[tech], "GW");
    }
    if (i > 0) {
      for (const auto& [id, rates] : f.expansion_rate) {
        t.row(y, fmt::format("expansion_rate_{}", id), rates[i - 1], "GW_per_GWh_per_yr");
      }
    }
    for (const auto& [id, h] : f.headroom_gw) t.row(y, fmt::format("headroom_{}", id), h[i], "GW");
  }
  return std::move(t).str();
}

std::string manifest_json(const ScenarioRun& result,
                          const std::vector<std::pair<std::string, std::string>>& files) {
  nlohmann::json j;
  j["scenario"] = result.run.scenario;
  j["tool_version"] = result.run.provenance.tool_version;
  j["dataset_checksum"] = result.run.provenance.dataset_checksum;
  j["config_checksum"] = result.run.provenance.config_checksum;
  auto periods = nlohmann::json::array();
  for (const auto& p : result.run.periods) periods.push_back(p.solution.year);
  j["periods"] = periods;
  auto listing = nlohmann::json::object();
  for (const auto& [name, text] : files) listing[name] = sha256_hex(text);
  j["files"] = listing;
  return j.dump(2) + "\n";
}

void write_results(const ModelInstance& instance, const ScenarioRun& result, const fs::path& dir) {
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"emissions.csv", emissions_csv(instance, result.run)},
      {"generation.csv", generation_csv(instance, result.run)},
      {"final_energy.csv", final_energy_csv(instance, result.run)},
      {"capacity.csv", capacity_csv(instance, result.run)},
      {"prices.csv", prices_csv(instance, result.run)},
      {"feasibility.csv", feasibility_csv(instance, result)},
  };
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw BadValue(fmt::format("cannot write '{}'", (dir / name).string()));
    out << text;
  };
  for (const auto& [name, text] : files) put(name, text);
  put("manifest.json", manifest_json(result, files));
}

std::string compare_results(const std::vector<fs::path>& dirs) {
  Table t("scenario,period,metric,value,unit");
  for (const auto& dir : dirs) {
    std::string scenario = dir.filename().string();
    if (std::ifstream m(dir / "manifest.json"); m) {
      try {
        scenario = nlohmann::json::parse(m).at("scenario").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw BadValue(fmt::format("{}: unreadable manifest: {}", dir.string(), e.what()));
      }
    }
    auto f = CsvTable::read(dir / "feasibility.csv", {"period", "metric", "value", "unit"});
    for (std::size_t r = 0; r < f.size(); ++r) {
      t.row(scenario, f.integer(r, "period"), f.text(r, "metric"), f.text(r, "value"), f.text(r, "unit"));
    }
  }
  return std::move(t).str();
}

}  // namespace iam
