#include "iam/emissions.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "iam/errors.hpp"

namespace iam {

std::size_t ledger_sector_index(std::string_view sector) {
  for (std::size_t i = 0; i < kLedgerSectors.size(); ++i) {
    if (kLedgerSectors[i] == sector) return i;
  }
  throw InvalidDataset(fmt::format("unknown ledger sector '{}'", sector));
}

namespace {

template <typename Fn>
double sum_sectors(const EmissionsLedger& l, Fn&& fn) {
  double total = 0.0;
  for (const auto& s : l.sectors) total += fn(s);
  return total;
}

}  // namespace

double EmissionsLedger::gross_mt() const {
  return sum_sectors(*this, [](const SectorEmissions& s) { return s.gross_mt; });
}
double EmissionsLedger::captured_mt() const {
  return sum_sectors(*this, [](const SectorEmissions& s) { return s.captured_mt; });
}
double EmissionsLedger::dac_mt() const {
  return sum_sectors(*this, [](const SectorEmissions& s) { return s.dac_mt; });
}
double EmissionsLedger::beccs_mt() const {
  return sum_sectors(*this, [](const SectorEmissions& s) { return s.beccs_mt; });
}
double EmissionsLedger::lulucf_mt() const {
  return sum_sectors(*this, [](const SectorEmissions& s) { return s.lulucf_mt; });
}

ExogenousEmissions exogenous_emissions(const ModelInstance& instance, int year) {
  const auto& p = instance.dataset().parameters;
  const double base_year = instance.grid().base_year();
  const double final_year = p.scalar("nonco2_final_year");
  const double progress = std::clamp((year - base_year) / (final_year - base_year), 0.0, 1.0);
  ExogenousEmissions e;
  e.nonco2_mt = p.scalar("nonco2_base_mt") * (1.0 - (1.0 - p.scalar("nonco2_final_fraction")) * progress);
  e.lulucf_sink_mt = p.series("lulucf_sink_mt", year);
  return e;
}

EmissionsLedger account_emissions(const PeriodSolution& solution, const ModelInstance& instance) {
  EmissionsLedger l;
  l.year = solution.year;
  for (std::size_t t = 0; t < instance.technologies().size(); ++t) {
    const double out = solution.tech_output[t];
    if (out <= 0.0) continue;
    const auto& rec = instance.technology(t);
    const auto& root = instance.nodes()[rec.root].spec;
    auto& s = l.sectors[ledger_sector_index(root.ledger_sector)];
    const double units = out * rec.mt_per_emission_unit;  // Mt per (t per price unit)
    const double potential = rec.spec.emission_factor * units;
    s.gross_mt += (1.0 - rec.spec.capture_fraction) * potential;
    if (root.role == SectorRole::Removal) {
      s.dac_mt += units;
      s.captured_mt += units;
      continue;
    }
    const double bio = rec.biogenic_capture * units;
    s.captured_mt += rec.spec.capture_fraction * potential + bio;
    s.beccs_mt += bio;
  }
  const auto exo = exogenous_emissions(instance, solution.year);
  l.sectors[ledger_sector_index("other")].lulucf_mt = exo.lulucf_sink_mt;
  l.nonco2_mt = exo.nonco2_mt;
  if (auto storage = instance.storage_commodity()) {
    l.storage_demand_mt = solution.demand[*storage] *
                          instance.commodity(*storage).price_units_per_quantity / 1e6;
  }
  return l;
}

double power_generation_twh(const PeriodSolution& solution, const ModelInstance& instance) {
  double ej = 0.0;
  for (std::size_t t : instance.power_technologies()) ej += solution.tech_output[t];
  return ej * kTwhPerEj;
}

double carbon_intensity_power(const EmissionsLedger& ledger, double generation_twh) {
  if (!(generation_twh > 0.0)) {
    throw ZeroGeneration(fmt::format("no electricity generated in {}", ledger.year));
  }
  const auto& p = ledger.sectors[ledger_sector_index("power")];
  const double net = p.gross_mt - p.dac_mt - p.beccs_mt - p.lulucf_mt;
  return net / generation_twh * 1000.0;
}

NetsShares nets_breakdown(const EmissionsLedger& ledger) {
  const double total = ledger.negative_mt();
  if (!(total > 0.0)) {
    throw NoNegativeEmissions(fmt::format("no negative emissions in {}", ledger.year));
  }
  return {ledger.dac_mt() / total, ledger.beccs_mt() / total, ledger.lulucf_mt() / total};
}

double electrification_share(const PeriodSolution& solution, const ModelInstance& instance,
                             std::string_view sector) {
  ledger_sector_index(sector);
  const std::size_t elec = instance.electricity();
  double total = 0.0;
  double electric = 0.0;
  for (std::size_t t = 0; t < instance.technologies().size(); ++t) {
    const auto& rec = instance.technology(t);
    const auto& root = instance.nodes()[rec.root].spec;
    if (root.role != SectorRole::EndUse || root.ledger_sector != sector) continue;
    for (const auto& in : rec.inputs) {
      if (!instance.commodity(in.commodity).is_energy) continue;
      const double q = solution.tech_output[t] * in.intensity;
      total += q;
      if (in.commodity == elec) electric += q;
    }
  }
  if (!(total > 0.0)) {
    throw EmptySector(fmt::format("sector '{}' uses no final energy in {}", sector, solution.year));
  }
  return electric / total;
}

}  // namespace iam
