#include "bfsi/timeseries.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <stdexcept>

namespace bfsi {

const char* const kEnergyHeader = "t,kinetic_thermal,elastic,dissipation_rate,source_rate,gronwall_bound";
const char* const kStabilityHeader = "t,chi_norm,psi_norm,F_seminorm,M_t,gronwall_envelope";
const char* const kRegularityHeader = "t,vt_l2,dt_l2,grad_v_solid,dh_v_l2,dh_d_l2,h2_proxy_fluid,pressure_h1";

namespace {

std::string join(std::initializer_list<double> values) {
  std::string out;
  char buf[32];
  for (double v : values) {
    if (!out.empty()) out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  }
  return out;
}

void append(const std::string& header, const std::string& row, const std::string& path) {
  bool fresh = true;
  {
    std::ifstream in(path);
    std::string first;
    if (in && std::getline(in, first)) {
      fresh = false;
      if (first != header) throw std::runtime_error(path + " holds a different time series (header mismatch)");
    }
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path + " for appending");
  if (fresh) out << header << '\n';
  out << row << '\n';
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

std::string csv_row(const EnergyReport& r) {
  return join({r.t, r.kinetic_thermal, r.elastic, r.dissipation_rate, r.source_rate, r.gronwall_bound});
}

std::string csv_row(const StabilityReport& r) {
  return join({r.t, r.chi_norm, r.psi_norm, r.F_seminorm, r.M_t, r.gronwall_envelope});
}

std::string csv_row(const RegularityReport& r) {
  return join({r.t, r.vt_l2, r.dt_l2, r.grad_v_solid, r.dh_v_l2, r.dh_d_l2, r.h2_proxy_fluid, r.pressure_h1});
}

void write_timeseries_row(const EnergyReport& r, const std::string& path) { append(kEnergyHeader, csv_row(r), path); }
void write_timeseries_row(const StabilityReport& r, const std::string& path) {
  append(kStabilityHeader, csv_row(r), path);
}
void write_timeseries_row(const RegularityReport& r, const std::string& path) {
  append(kRegularityHeader, csv_row(r), path);
}

}  // namespace bfsi
