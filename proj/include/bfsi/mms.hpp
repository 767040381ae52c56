#pragma once

#include <vector>

#include "bfsi/config.hpp"

namespace bfsi {

struct MmsRow {
  DomainSpec domain;
  double dt = 0.0;
  double err_u = 0.0;  // L² over the fluid
  double err_d = 0.0;  // L² over the strip
  double err_w = 0.0;  // L² over the solid
  double max_div = 0.0;
};

// Runs the config's scheme to T_end on `domain` with step dt and compares
// against the [initial] expressions evaluated at T_end.
MmsRow run_mms_level(const Config& cfg, const DomainSpec& domain, double dt);

struct MmsStudy {
  // Level i refines y and dt together: Ny_f, Ny_s times 2^i and dt / 2^i (Nx
  // fixed; the exact solution is band-limited in x).
  std::vector<MmsRow> spatial;
  // On the grid one refinement past the finest spatial level, dt = T_end / (5·2^j).
  std::vector<MmsRow> temporal;
};

MmsStudy run_mms_study(const Config& cfg, int levels);

// log2 of successive error ratios for the chosen error member.
std::vector<double> observed_orders(const std::vector<MmsRow>& rows, double MmsRow::*err);

}  // namespace bfsi
