#pragma once

#include <array>
#include <vector>

#include "bfsi/fields.hpp"

namespace bfsi {

enum class BcKind { Dirichlet, Neumann };

// -Δp = rhs on the fluid. bc_data[0] is the line y = -L/2, bc_data[1] is y = +L/2.
// Neumann data is the outward normal derivative ∂p/∂n.
struct PoissonProblem {
  ScalarField rhs;
  BcKind bc_kind = BcKind::Dirichlet;
  std::array<std::vector<double>, 2> bc_data;
};

ScalarField solve_poisson(const PoissonProblem& problem, const Grid& g);

struct Projection {
  VectorField u;
  ScalarField phi;
};

// Orthogonal projection (fluid quadrature) onto the discretely
// divergence-free fields; `phi` is the mean-zero potential of the removed part.
Projection project(const VectorField& vec, const Grid& g);

// Same projection under per-row weights (fluid local rows). Interface rows
// may carry the half cells of both subdomains.
Projection project_weighted(const VectorField& vec, const std::vector<double>& row_weights, const Grid& g);

// Compact (1/4, 1/2, 1/4) filter across y at interior fluid rows.
ScalarField pressure_filter_y(const ScalarField& f, const Grid& g);

// Share of a fluid field's energy carried by the alternating y-mode.
double checkerboard_fraction(const ScalarField& f);

ScalarField initial_pressure(const VectorField& u0, const ScalarField& rho0, const VectorField& w0,
                             const VectorField& f1_at_0, const Params& params, const Grid& g);

}  // namespace bfsi
