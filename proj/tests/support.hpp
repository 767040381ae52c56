#pragma once

// Fixtures shared by the unit tests and the acceptance binary.

#include <cmath>
#include <string>

#include "bfsi/pressure.hpp"
#include "bfsi/stepper.hpp"

namespace testsupport {

using namespace bfsi;

inline double energy(const State& s, const Params& prm, const Grid& g) {
  const double kin = norm_l2(s.v, Region::Whole, g), th = norm_l2(s.d, Region::Whole, g);
  return 0.5 * (kin * kin + th * th) + 0.5 * prm.mu * grad_inner(s.w, s.w, Region::Solid, g);
}

// Smooth state with a divergence-free fluid velocity, an elastic field that
// vanishes on the outer lines, and matching interface values.
inline State smooth_state(const Grid& g, double amp = 1.0) {
  State s = State::zero(g);
  const double L = g.spec.L;
  VectorField uf(g, Region::Fluid), phi(g, Region::Solid);
  uf.c[0] = sample(g, Region::Fluid, [&](double x, double y) { return amp * (std::cos(y) * std::sin(x) + 0.3); });
  uf.c[1] = sample(g, Region::Fluid, [&](double x, double y) { return amp * std::sin(y) * std::cos(2 * x); });
  phi.c[0] = sample(g, Region::Solid, [&](double x, double y) {
    return amp * std::sin(M_PI * (L - std::abs(y)) / L) * std::cos(x);
  });
  s.v = merge(uf, phi, g);
  project_state_velocity(s, g);
  s.w.c[0] = sample(g, Region::Solid, [&](double x, double y) {
    return 0.1 * amp * std::sin(2 * M_PI * (L - std::abs(y)) / L) * std::sin(x);
  });
  s.w.c[1] = sample(g, Region::Solid, [&](double x, double y) {
    return 0.05 * amp * std::sin(M_PI * (L - std::abs(y)) / L) * std::cos(3 * x);
  });
  s.d = sample(g, Region::Whole, [&](double x, double y) { return std::cos(x) * std::cos(y) + 0.2 * std::sin(2 * x); });
  for (int c = 0; c < 2; ++c)
    for (int l : {0, 2 * g.spec.Ny_s + 1})
      for (int i = 0; i < g.nx(); ++i) s.w.c[c](i, l) = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int r : g.gamma_out_rows)
      for (int i = 0; i < g.nx(); ++i) s.v.c[c](i, r) = 0.0;
  return s;
}

inline Params zero_buoyancy() {
  Params p;
  p.epsilon = 0.5;
  p.mu = 1.0;
  p.k1 = 0.5;
  p.k2 = 1.0;
  p.e_dir = {0.0, 0.0};
  return p;
}

inline std::string source_path(const std::string& rel) { return std::string(BFSI_SOURCE_DIR) + "/" + rel; }

// Every required key with zero data.
inline std::string zero_config_text(int nx = 8, int nyf = 8, int nys = 4, double T_end = 0.1) {
  return "[domain]\nL = 1\nNx = " + std::to_string(nx) + "\nNy_f = " + std::to_string(nyf) +
         "\nNy_s = " + std::to_string(nys) +
         "\n[params]\nepsilon = 1\nmu = 1\nk1 = 1\nk2 = 1\n"
         "[scheme]\ndt = 0.01\nT_end = " + std::to_string(T_end) +
         "\n[initial]\nu0_x = \"0\"\nu0_y = \"0\"\nrho0 = \"0\"\nw0_x = \"0\"\nw0_y = \"0\"\n"
         "w1_x = \"0\"\nw1_y = \"0\"\ntheta0 = \"0\"\n"
         "[forcing]\nf1_x = \"0\"\nf1_y = \"0\"\nf2 = \"0\"\nf3_x = \"0\"\nf3_y = \"0\"\nf4 = \"0\"\n"
         "[output]\ndirectory = out\nsnapshot_every = 0\nseries_every = 1\n";
}

// Replaces the value of the first `key = ...` line.
inline std::string with_value(std::string text, const std::string& key, const std::string& value) {
  const std::string head = "\n" + key + " = ";
  const auto at = text.find(head);
  if (at == std::string::npos) return text;
  const auto end = text.find('\n', at + 1);
  return text.replace(at + head.size(), end - at - head.size(), value);
}

}  // namespace testsupport
