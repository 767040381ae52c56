#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bfsi/fields.hpp"
#include "bfsi/stepper.hpp"

namespace bfsi {

class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnergyReport {
  double t = 0.0;
  double kinetic_thermal = 0.0;  // ½(‖v‖² + ‖d‖²) over the whole strip
  double elastic = 0.0;          // (μ/2)‖∇w‖² over the solid
  double dissipation_rate = 0.0;
  double source_rate = 0.0;
  double gronwall_bound = 0.0;  // e^{Ct} E(0)

  // Carried along a series; not part of the CSV row.
  double initial_energy = 0.0;
  double initial_time = 0.0;
  double gronwall_C = 0.0;  // running fit: smallest C covering the series so far
  double balance_residual = 0.0;  // |dE/dt + dissipation − source|, 0 without a predecessor

  double energy() const { return kinetic_thermal + elastic; }
};

// With prev, E(0) is inherited, C is refitted to cover this report, and the
// balance residual is the backward-difference rate against trapezoid-averaged
// rates.
EnergyReport energy_report(const State& s, const Forcing& forcing, const Params& params, const Grid& g,
                           const EnergyReport* prev = nullptr);

// Smallest C ≥ 0 with E(t) ≤ e^{Ct} E(0) on the series; rewrites every
// gronwall_bound with it.
double fit_gronwall_constant(std::vector<EnergyReport>& series);

struct TestBank {
  std::vector<VectorField> velocity;  // whole; discretely divergence-free on the fluid, zero on the outer lines
  std::vector<ScalarField> scalar;    // whole; zero normal derivative on the outer lines
};

// Eight velocity and eight scalar fields with |k| ≤ 2 and low-order y
// profiles, each family orthonormal in the whole-strip quadrature.
TestBank make_test_bank(const Grid& g);

// Throws DiagnosticError if a velocity test has fluid divergence above 1e-8
// or nonzero values on the outer lines.
void check_test_bank(const TestBank& bank, const Grid& g);

// Max |residual| of the momentum and heat weak forms at the later state over
// the bank, time derivatives by backward difference.
std::pair<double, double> weak_residual(const State& before, const State& after, const TestBank& bank,
                                        const Forcing& forcing, const Params& params, const Grid& g);

struct CompatibilityReport {
  double tangential_stress_residual = 0.0;
  double thermal_flux_residual = 0.0;
  bool passed = true;
};

// u0, rho0 cover the fluid; w0, theta0 cover the solid.
CompatibilityReport check_compatibility(const VectorField& u0, const ScalarField& rho0, const VectorField& w0,
                                        const ScalarField& theta0, const Params& params, const Grid& g,
                                        double tol);

struct StabilityReport {
  double t = 0.0;
  double chi_norm = 0.0;
  double psi_norm = 0.0;
  double F_seminorm = 0.0;
  double M_t = 0.0;
  double gronwall_envelope = 0.0;
};

struct StabilityRun {
  std::vector<StabilityReport> series;
  double C_prime = 0.0;
  double C_fit = 0.0;
  double fit_slack = 1.0;
  std::vector<double> div_residuals;  // per step, both runs
};

// Perturbation of size delta (L² norm over the strip) added to v and d:
// an x-independent tangential velocity and a smooth temperature bump.
State perturb_state(const State& s, double delta, const Grid& g);

StabilityRun stability_experiment(const State& state0, double delta, const Forcing& forcing, const Params& params,
                                  const SchemeConfig& scheme, const Grid& g, int report_every = 1);

struct RegularityReport {
  double t = 0.0;
  double vt_l2 = 0.0;
  double dt_l2 = 0.0;
  double grad_v_solid = 0.0;
  double dh_v_l2 = 0.0;
  double dh_d_l2 = 0.0;
  double h2_proxy_fluid = 0.0;
  double pressure_h1 = 0.0;
};

// The time step is taken from the two states' times, or scheme.dt if equal.
RegularityReport regularity_report(const State& s, const State& prev, const SchemeConfig& scheme,
                                   const Params& params, const Grid& g);

struct BoundednessCheck {
  bool passed = true;
  std::string worst_quantity;
  double worst_ratio = 0.0;  // max over the run / early max
};

// Each quantity must stay below factor × its max over the first
// early_fraction of the series.
BoundednessCheck check_regularity_bounded(const std::vector<RegularityReport>& series, double early_fraction = 0.1,
                                          double factor = 10.0);

// Smooth random field on r with x-modes |k| ≤ kmax and y-polynomials up to
// degree ymax, from a seeded generator.
ScalarField random_band_limited(const Grid& g, Region r, std::uint64_t seed, int kmax = 4, int ymax = 4);

struct InequalityFit {
  double ladyzhenskaya = 0.0;  // ‖u‖_{L4} ≤ C (‖u‖ + |u|₁)^{1/2} ‖u‖^{1/2}
  double trace = 0.0;          // ‖u|_Γ‖_{L4} ≤ C (‖u‖ + |u|₁)
};

// Max ratios over `count` seeded fields on the fluid.
InequalityFit fit_inequality_constants(const Grid& g, int count, std::uint64_t seed);

struct IdentityResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// |b(u,v,v) − ½∮(u·n)|v|²| / (‖u‖_{H1}‖v‖²_{H1}) maximized over `count`
// seeded pairs with u discretely divergence-free.
double advection_identity_defect(const Grid& g, int count, std::uint64_t seed);

// Advection-boundary identity, difference-quotient product rule and
// summation by parts, x and y summation by parts.
std::vector<IdentityResult> run_identity_suite(const Grid& g, std::uint64_t seed, int count = 20);

}  // namespace bfsi
