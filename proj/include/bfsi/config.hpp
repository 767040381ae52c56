#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "bfsi/expr.hpp"
#include "bfsi/fields.hpp"
#include "bfsi/stepper.hpp"

namespace bfsi {

// Bad config text or data that fails validation (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExprSource {
  std::string text;
  ExprAst ast;
};

// The [initial] expressions may depend on t; the initial data is their value
// at t = 0 and the MMS study reads them as the exact solution.
struct InitialData {
  ExprSource u0[2], rho0, w0[2], w1[2], theta0;
};

struct ForcingData {
  ExprSource f1[2], f2, f3[2], f4;
};

struct OutputSpec {
  std::string directory;
  int snapshot_every = 0;  // 0 disables snapshots after the initial one
  int series_every = 1;
};

struct Config {
  DomainSpec domain;
  Params params;
  SchemeConfig scheme;
  InitialData initial;
  ForcingData forcing;
  OutputSpec output;
  std::uint64_t seed = 0;

  // Filled by validation: max change of u₀ under the initial projection.
  double projection_correction = 0.0;
};

// Parses INI text; `source` names the origin in error messages. Runs the
// full validation, including the initial projection.
Config parse_config(const std::string& text, const std::string& source = "<config>");
Config load_config(const std::string& path);

// Initial state with the projected fluid velocity, interface values shared
// and the initial pressure filled in. `correction` receives the projection's
// max change.
State build_initial_state(const Config& cfg, const Grid& g, double* correction = nullptr);

// Exact fields of the [initial] expressions at time t (v from u₀ and w₁, d
// from ρ₀ and θ₀, w from w₀); pressure left zero.
State exact_state(const Config& cfg, const Grid& g, double t);

Forcing build_forcing(const Config& cfg, const Grid& g);

}  // namespace bfsi
