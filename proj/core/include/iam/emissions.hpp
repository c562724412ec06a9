#pragma once

#include <array>
#include <string_view>

#include "iam/markets.hpp"

namespace iam {

inline constexpr std::array<std::string_view, 5> kLedgerSectors = {
    "power", "industry", "buildings", "transport", "other"};

std::size_t ledger_sector_index(std::string_view sector);

/// Mt CO2 for one sector in one period. Gross is what reaches the
/// atmosphere after capture; removals are booked separately.
struct SectorEmissions {
  double gross_mt = 0.0;
  double captured_mt = 0.0;
  double dac_mt = 0.0;
  double beccs_mt = 0.0;
  double lulucf_mt = 0.0;
};

struct EmissionsLedger {
  int year = 0;
  std::array<SectorEmissions, kLedgerSectors.size()> sectors{};
  double nonco2_mt = 0.0;  // exogenous non-CO2 wedge, MtCO2e
  double storage_demand_mt = 0.0;

  double gross_mt() const;
  double captured_mt() const;
  double dac_mt() const;
  double beccs_mt() const;
  double lulucf_mt() const;
  double negative_mt() const { return dac_mt() + beccs_mt() + lulucf_mt(); }
  /// Net GHG, MtCO2e: gross - negatives + non-CO2 wedge.
  double net_mt() const { return gross_mt() - negative_mt() + nonco2_mt; }
};

/// Land sink (positive Mt removed) and non-CO2 wedge for a year. The wedge
/// falls linearly from its base-year level to the final fraction.
struct ExogenousEmissions {
  double lulucf_sink_mt = 0.0;
  double nonco2_mt = 0.0;
};
ExogenousEmissions exogenous_emissions(const ModelInstance& instance, int year);

EmissionsLedger account_emissions(const PeriodSolution& solution, const ModelInstance& instance);

double power_generation_twh(const PeriodSolution& solution, const ModelInstance& instance);

/// (power gross - power removals) / generation, gCO2/kWh. Throws ZeroGeneration.
double carbon_intensity_power(const EmissionsLedger& ledger, double generation_twh);

struct NetsShares {
  double dac = 0.0;
  double beccs = 0.0;
  double lulucf = 0.0;
};
/// Throws NoNegativeEmissions when the period has no removals.
NetsShares nets_breakdown(const EmissionsLedger& ledger);

/// Electricity share of final energy across the end-use trees booked to a
/// ledger sector. Throws EmptySector.
double electrification_share(const PeriodSolution& solution, const ModelInstance& instance,
                             std::string_view sector);

}  // namespace iam
