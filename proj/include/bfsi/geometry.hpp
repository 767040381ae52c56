#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bfsi {

struct DomainSpec {
  double L = 1.0;
  int Nx = 16;
  int Ny_f = 16;
  int Ny_s = 8;
};

enum class Region { Fluid, Solid, Whole };
enum class Boundary { Gamma, GammaOut };

const char* region_name(Region r);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows are indexed bottom to top over the whole strip:
//   0 .. Ny_s                  lower solid (row 0 is y = -L, row Ny_s is y = -L/2)
//   Ny_s .. Ny_s + Ny_f        fluid (shared end rows are the interface)
//   Ny_s + Ny_f .. 2Ny_s+Ny_f  upper solid (last row is y = +L)
// Solid-region fields store the lower layer then the upper layer, so the
// interface rows appear once per layer there.
struct Grid {
  DomainSpec spec;
  double hx = 0.0;
  double hy_f = 0.0;
  double hy_s = 0.0;
  std::vector<double> x_coords;
  std::vector<double> y_coords_fluid;
  std::vector<double> y_coords_solid_lower;
  std::vector<double> y_coords_solid_upper;
  std::vector<double> y_whole;
  std::array<int, 2> gamma_rows{};
  std::array<int, 2> gamma_out_rows{};

  int nx() const { return spec.Nx; }
  int whole_rows() const { return 2 * spec.Ny_s + spec.Ny_f + 1; }
  int fluid_rows() const { return spec.Ny_f + 1; }
  int solid_rows() const { return 2 * (spec.Ny_s + 1); }
  int rows(Region r) const;

  // Sum of per-region node counts, interface rows counted once per region.
  std::size_t node_count() const;
  // Distinct storage nodes of a whole-region field.
  std::size_t distinct_node_count() const;

  // Whole-strip row of a region-local row.
  int whole_row(Region r, int local) const;
  double y(Region r, int local) const { return y_whole[whole_row(r, local)]; }

  bool is_gamma_row(int whole) const { return whole == gamma_rows[0] || whole == gamma_rows[1]; }
  bool is_gamma_out_row(int whole) const {
    return whole == gamma_out_rows[0] || whole == gamma_out_rows[1];
  }
  bool in_fluid(int whole) const { return whole >= gamma_rows[0] && whole <= gamma_rows[1]; }
  bool in_solid(int whole) const { return whole <= gamma_rows[0] || whole >= gamma_rows[1]; }

  // Outward normal of the fluid at an interface row: -1 at y = -L/2, +1 at y = +L/2.
  int normal_sign(int whole) const;
  // Outward normal of the whole strip at an outer row.
  int outer_normal_sign(int whole) const;

  // Trapezoid weights in y for a region's local rows.
  std::vector<double> y_weights(Region r) const;
  // Trapezoid weights of the whole strip restricted to a subregion,
  // indexed by whole row (zero outside the subregion).
  std::vector<double> whole_y_weights(Region sub) const;
};

Grid build_grid(const DomainSpec& spec);

struct Vec2 {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const Vec2&) const = default;
};

// Π = Id - n⊗n at an interface row.
Vec2 tangential_project(const Grid& g, int whole_row, Vec2 v);

}  // namespace bfsi
