#pragma once

#include "bfsi/fields.hpp"

namespace bfsi {

// Largest x-wavenumber kept after a product (2/3 rule).
inline int dealias_kmax(int nx) { return nx / 3; }

ScalarField ddx(const ScalarField& f);
ScalarField d2dx2(const ScalarField& f);

// Second-order y-derivative on r (Fluid or Solid): centered at interior
// rows, one-sided three-point at interface and outer rows.
ScalarField ddy(const ScalarField& f, Region r, const Grid& g);

// Cell-difference y-derivative (f[l+1] - f[l]) / h per cell of r, stored
// at the lower row of each cell; the top row of each layer holds zero.
ScalarField ddy_cell(const ScalarField& f, Region r, const Grid& g);

VectorField gradient(const ScalarField& f, Region r, const Grid& g);
ScalarField divergence(const VectorField& u, const Grid& g);

// coefficient · (∂xx + ∂yy) on r. Interface and outer rows are left at zero.
ScalarField laplacian(const ScalarField& f, Region r, double coefficient, const Grid& g);
VectorField laplacian(const VectorField& f, Region r, double coefficient, const Grid& g);

// (vel · ∇) field on the fluid, truncated to |k| <= dealias_kmax.
ScalarField advect(const VectorField& vel, const ScalarField& field, const Grid& g);
VectorField advect(const VectorField& vel, const VectorField& field, const Grid& g);

// Quadrature of (u · ∇v) w over r.
double trilinear_b(const VectorField& u, const ScalarField& v, const ScalarField& w, Region r, const Grid& g);
double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w, Region r, const Grid& g);

// ½ ∫_Γ (u·n) v w over both interface lines.
double boundary_gamma(const VectorField& u, const ScalarField& v, const ScalarField& w, const Grid& g);
double boundary_gamma(const VectorField& u, const VectorField& v, const VectorField& w, const Grid& g);

// D_h f = (f(x+h) - f(x)) / h with h = m·hx, m >= 1.
ScalarField diff_quotient_x(const ScalarField& f, double h, const Grid& g);
// D_{-h} D_h f = (f(x+h) - 2f(x) + f(x-h)) / h².
ScalarField second_diff_quotient_x(const ScalarField& f, double h, const Grid& g);

// Row of a field that sits on the given whole-strip row, or -1.
int local_row_of(const ScalarField& f, int whole_row, const Grid& g);

}  // namespace bfsi

namespace bfsi {

struct StencilEntry {
  int col;
  double coef;
};

// Matrix of ddy on one layer of `rows` nodes with spacing h.
std::vector<std::vector<StencilEntry>> ddy_matrix(int rows, double h);

// Left null vector z of ddy_matrix (zᵀD = 0), normalized to z[0] = 1.
std::vector<double> ddy_left_null(int rows, double h);

}  // namespace bfsi
