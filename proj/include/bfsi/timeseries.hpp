#pragma once

#include <string>

#include "bfsi/diagnostics.hpp"

namespace bfsi {

// CSV headers, one per report type. Values are printed with 17 significant
// digits so every double round-trips.
extern const char* const kEnergyHeader;      // t,kinetic_thermal,elastic,dissipation_rate,source_rate,gronwall_bound
extern const char* const kStabilityHeader;   // t,chi_norm,psi_norm,F_seminorm,M_t,gronwall_envelope
extern const char* const kRegularityHeader;  // t,vt_l2,dt_l2,grad_v_solid,dh_v_l2,dh_d_l2,h2_proxy_fluid,pressure_h1

std::string csv_row(const EnergyReport& r);
std::string csv_row(const StabilityReport& r);
std::string csv_row(const RegularityReport& r);

// Appends one row; the header is written only when the file is new or
// empty. An existing file with a different header is an error.
void write_timeseries_row(const EnergyReport& r, const std::string& path);
void write_timeseries_row(const StabilityReport& r, const std::string& path);
void write_timeseries_row(const RegularityReport& r, const std::string& path);

}  // namespace bfsi
