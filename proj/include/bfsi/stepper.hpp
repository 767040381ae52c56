#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bfsi/fields.hpp"

namespace bfsi {

class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CflError : public StepError {
 public:
  using StepError::StepError;
};

enum class AdvScheme { AB2, RK2 };

struct SchemeConfig {
  double dt = 1e-3;
  double T_end = 1.0;
  AdvScheme adv_scheme = AdvScheme::AB2;
  double diffusion_theta = 0.5;
  double coupling_tol = 1e-8;
  int max_substeps = 1;

  // Subsystem switches for isolated checks. A frozen fluid keeps its
  // velocity (interface rows included), so the solid sees a prescribed
  // interface velocity; a frozen flow keeps v and w; frozen heat keeps d.
  bool freeze_fluid = false;
  bool freeze_flow = false;
  bool freeze_heat = false;

  void validate() const;
};

struct StepReport {
  double t_new = 0.0;
  double interface_residual = 0.0;
  double div_residual = 0.0;
  int solver_iterations = 0;
};

// Strong-form interface mismatch with second-order one-sided derivatives.
struct InterfaceResidual {
  double stress = 0.0;  // |ε∂u/∂n − p n − ½(u·n)u − μ∂w/∂n|
  double flux = 0.0;    // |k₁∂ρ/∂n − ½(u·n)ρ − k₂∂θ/∂n|
};

InterfaceResidual interface_residual(const State& s, const Params& params, const Grid& g);

struct Acceleration {
  VectorField vt;  // whole
  ScalarField dt;  // whole
  double vt_l2 = 0.0;
  double dt_l2 = 0.0;
};

// v_t and d_t at t = 0 from the strong equations with p₀ = state0.p.
Acceleration initial_acceleration(const State& state0, const Forcing& forcing, const Params& params, const Grid& g);

// Checks the state against the stepper's preconditions (finite values,
// w = 0 on the outer lines, shapes).
void validate_state(const State& s, const Grid& g);

// Projects the fluid velocity of s onto discretely divergence-free fields
// in the whole-strip kinetic-energy weights. Returns the max change.
double project_state_velocity(State& s, const Grid& g);

// Stepper with cached per-mode factorizations and the explicit-term history
// needed by AB2. The first step (and every step under RK2) uses Heun's
// predictor-corrector for the explicit part.
class Stepper {
 public:
  Stepper(const Grid& g, const Params& params, const SchemeConfig& scheme);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  StepReport advance(State& s, const Forcing& forcing);
  void reset_history();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<State, StepReport> advance_one_step(const State& state, const Forcing& forcing, const Params& params,
                                              const SchemeConfig& scheme, const Grid& g);

struct Observer {
  int every = 1;  // called after steps that are multiples of this, and at step 0
  std::function<void(int step, const State&, const StepReport&)> fn;
};

struct RunResult {
  State final_state;
  std::vector<StepReport> reports;
};

// Number of steps for T_end at the requested dt; dt is shrunk so the steps
// land exactly on T_end.
int step_count(const SchemeConfig& scheme);

RunResult run_simulation(const State& state0, const Forcing& forcing, const Params& params, const SchemeConfig& scheme,
                         const Grid& g, const std::vector<Observer>& observers = {});

}  // namespace bfsi
