#include "bfsi/mms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfsi {

MmsRow run_mms_level(const Config& cfg, const DomainSpec& domain, double dt) {
  const Grid g = build_grid(domain);
  SchemeConfig scheme = cfg.scheme;
  scheme.dt = dt;
  const State s0 = build_initial_state(cfg, g);
  const Forcing forcing = build_forcing(cfg, g);
  const RunResult run = run_simulation(s0, forcing, cfg.params, scheme, g);
  const State exact = exact_state(cfg, g, run.final_state.t);

  MmsRow row;
  row.domain = domain;
  row.dt = scheme.T_end / std::max(1, step_count(scheme));
  row.err_u = norm_l2(restrict_to(run.final_state.v - exact.v, Region::Fluid, g), Region::Fluid, g);
  row.err_d = norm_l2(run.final_state.d - exact.d, Region::Whole, g);
  row.err_w = norm_l2(run.final_state.w - exact.w, Region::Solid, g);
  for (const auto& r : run.reports) row.max_div = std::max(row.max_div, r.div_residual);
  return row;
}

MmsStudy run_mms_study(const Config& cfg, int levels) {
  if (levels < 2) throw std::invalid_argument("an MMS study needs at least two levels");
  MmsStudy study;
  DomainSpec d = cfg.domain;
  double dt = cfg.scheme.dt;
  for (int i = 0; i < levels; ++i) {
    study.spatial.push_back(run_mms_level(cfg, d, dt));
    d.Ny_f *= 2;
    d.Ny_s *= 2;
    dt *= 0.5;
  }
  for (int j = 0; j < levels; ++j) study.temporal.push_back(run_mms_level(cfg, d, cfg.scheme.T_end / (5.0 * (1 << j))));
  return study;
}

std::vector<double> observed_orders(const std::vector<MmsRow>& rows, double MmsRow::*err) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(std::log2(rows[i - 1].*err / rows[i].*err));
  return out;
}

}  // namespace bfsi
