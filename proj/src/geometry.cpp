#include "bfsi/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace bfsi {

const char* region_name(Region r) {
  switch (r) {
    case Region::Fluid: return "fluid";
    case Region::Solid: return "solid";
    case Region::Whole: return "whole";
  }
  return "?";
}

int Grid::rows(Region r) const {
  switch (r) {
    case Region::Fluid: return fluid_rows();
    case Region::Solid: return solid_rows();
    case Region::Whole: return whole_rows();
  }
  return 0;
}

std::size_t Grid::node_count() const {
  return static_cast<std::size_t>(spec.Nx) *
         static_cast<std::size_t>(spec.Ny_f + 2 * spec.Ny_s + 3);
}

std::size_t Grid::distinct_node_count() const {
  return static_cast<std::size_t>(spec.Nx) * static_cast<std::size_t>(whole_rows());
}

int Grid::whole_row(Region r, int local) const {
  if (local < 0 || local >= rows(r)) throw GeometryError("row index out of range");
  switch (r) {
    case Region::Whole: return local;
    case Region::Fluid: return gamma_rows[0] + local;
    case Region::Solid:
      if (local <= spec.Ny_s) return local;
      return gamma_rows[1] + (local - spec.Ny_s - 1);
  }
  return -1;
}

int Grid::normal_sign(int whole) const {
  if (whole == gamma_rows[0]) return -1;
  if (whole == gamma_rows[1]) return +1;
  throw GeometryError("row " + std::to_string(whole) + " is not on the interface");
}

int Grid::outer_normal_sign(int whole) const {
  if (whole == gamma_out_rows[0]) return -1;
  if (whole == gamma_out_rows[1]) return +1;
  throw GeometryError("row " + std::to_string(whole) + " is not on the outer boundary");
}

std::vector<double> Grid::y_weights(Region r) const {
  std::vector<double> w(rows(r), 0.0);
  switch (r) {
    case Region::Fluid:
      for (auto& v : w) v = hy_f;
      w.front() = w.back() = 0.5 * hy_f;
      break;
    case Region::Solid:
      for (auto& v : w) v = hy_s;
      w[0] = w[spec.Ny_s] = w[spec.Ny_s + 1] = w.back() = 0.5 * hy_s;
      break;
    case Region::Whole: {
      auto f = whole_y_weights(Region::Fluid);
      auto s = whole_y_weights(Region::Solid);
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = f[j] + s[j];
      break;
    }
  }
  return w;
}

std::vector<double> Grid::whole_y_weights(Region sub) const {
  std::vector<double> w(whole_rows(), 0.0);
  if (sub == Region::Whole) return y_weights(Region::Whole);
  auto local = y_weights(sub);
  for (int l = 0; l < rows(sub); ++l) w[whole_row(sub, l)] += local[l];
  return w;
}

Grid build_grid(const DomainSpec& spec) {
  if (!(spec.L > 0.0) || !std::isfinite(spec.L)) throw GeometryError("L must be positive and finite");
  if (spec.Nx % 2 != 0) throw GeometryError("Nx must be even");
  if (spec.Nx < 4) throw GeometryError("Nx must be at least 4");
  if (spec.Ny_f % 2 != 0 || spec.Ny_f < 4) throw GeometryError("Ny_f must be even and at least 4");
  if (spec.Ny_s < 2) throw GeometryError("Ny_s must be at least 2");

  Grid g;
  g.spec = spec;
  const double two_pi = 2.0 * std::numbers::pi;
  g.hx = two_pi / spec.Nx;
  g.hy_f = spec.L / spec.Ny_f;
  g.hy_s = 0.5 * spec.L / spec.Ny_s;

  g.x_coords.resize(spec.Nx);
  for (int i = 0; i < spec.Nx; ++i) g.x_coords[i] = two_pi * i / spec.Nx;

  g.gamma_rows = {spec.Ny_s, spec.Ny_s + spec.Ny_f};
  g.gamma_out_rows = {0, 2 * spec.Ny_s + spec.Ny_f};

  const double L = spec.L;
  g.y_whole.resize(g.whole_rows());
  // Node ordinates are computed from the nearest anchor line so that the
  // interface and outer rows land exactly on ±L/2 and ±L.
  for (int j = 0; j <= spec.Ny_s; ++j) {
    g.y_whole[j] = (j * 2 <= spec.Ny_s) ? -L + j * g.hy_s : -0.5 * L - (spec.Ny_s - j) * g.hy_s;
  }
  for (int j = 0; j <= spec.Ny_f; ++j) {
    g.y_whole[g.gamma_rows[0] + j] =
        (j * 2 <= spec.Ny_f) ? -0.5 * L + j * g.hy_f : 0.5 * L - (spec.Ny_f - j) * g.hy_f;
  }
  for (int j = 0; j <= spec.Ny_s; ++j) {
    g.y_whole[g.gamma_rows[1] + j] =
        (j * 2 <= spec.Ny_s) ? 0.5 * L + j * g.hy_s : L - (spec.Ny_s - j) * g.hy_s;
  }
  g.y_whole[g.gamma_rows[0]] = -0.5 * L;
  g.y_whole[g.gamma_rows[1]] = 0.5 * L;
  g.y_whole[g.gamma_out_rows[0]] = -L;
  g.y_whole[g.gamma_out_rows[1]] = L;

  for (int l = 0; l < g.fluid_rows(); ++l) g.y_coords_fluid.push_back(g.y(Region::Fluid, l));
  for (int j = 0; j <= spec.Ny_s; ++j) {
    g.y_coords_solid_lower.push_back(g.y_whole[j]);
    g.y_coords_solid_upper.push_back(g.y_whole[g.gamma_rows[1] + j]);
  }
  return g;
}

Vec2 tangential_project(const Grid& g, int whole_row, Vec2 v) {
  (void)g.normal_sign(whole_row);
  return {v.a, 0.0};
}

}  // namespace bfsi
