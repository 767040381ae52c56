#include <gtest/gtest.h>

#include <cmath>

#include "bfsi/config.hpp"
#include "bfsi/diagnostics.hpp"
#include "bfsi/operators.hpp"
#include "support.hpp"

using namespace bfsi;
using namespace testsupport;

namespace {

Config mms_config() { return load_config(source_path("configs/mms.ini")); }

Config mms_on(int nyf, int nys) {
  Config c = mms_config();
  c.domain.Ny_f = nyf;
  c.domain.Ny_s = nys;
  return c;
}

// Max balance residual and weak residuals over a short MMS run.
struct ShortRun {
  double balance = 0.0, weak_v = 0.0, weak_d = 0.0;
};

ShortRun short_mms_run(int nyf, double dt, double T) {
  const Config cfg = mms_on(nyf, nyf / 2);
  const Grid g = build_grid(cfg.domain);
  SchemeConfig sc = cfg.scheme;
  sc.dt = dt;
  State s = build_initial_state(cfg, g);
  const Forcing f = build_forcing(cfg, g);
  const TestBank bank = make_test_bank(g);
  Stepper st(g, cfg.params, sc);
  EnergyReport e = energy_report(s, f, cfg.params, g);
  ShortRun out;
  const int steps = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k < steps; ++k) {
    const State prev = s;
    st.advance(s, f);
    e = energy_report(s, f, cfg.params, g, &e);
    out.balance = std::max(out.balance, e.balance_residual);
    const auto [r1, r2] = weak_residual(prev, s, bank, f, cfg.params, g);
    out.weak_v = std::max(out.weak_v, r1);
    out.weak_d = std::max(out.weak_d, r2);
  }
  return out;
}

}  // namespace

TEST(Energy, ZeroStateIsAllZero) {
  const Grid g = build_grid({1.0, 8, 8, 4});
  const EnergyReport r = energy_report(State::zero(g), Forcing{}, Params{}, g);
  EXPECT_EQ(r.kinetic_thermal, 0.0);
  EXPECT_EQ(r.elastic, 0.0);
  EXPECT_EQ(r.dissipation_rate, 0.0);
  EXPECT_EQ(r.source_rate, 0.0);
  EXPECT_EQ(r.gronwall_bound, 0.0);
}

TEST(Energy, ConstantTemperature) {
  const Grid g = build_grid({1.0, 8, 8, 4});
  State s = State::zero(g);
  s.d = ScalarField(g, Region::Whole, 2.0);
  Params p;
  p.e_dir = {0.0, 0.0};
  const EnergyReport r = energy_report(s, Forcing{}, p, g);
  // |Ω| = 2π · 2L.
  EXPECT_NEAR(r.kinetic_thermal, 0.5 * 4.0 * 4.0 * M_PI, 1e-12);
  EXPECT_NEAR(r.dissipation_rate, 0.0, 1e-14);
  EXPECT_EQ(r.elastic, 0.0);
}

TEST(Energy, TermsMatchNorms) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  const State s = smooth_state(g);
  Params p = zero_buoyancy();
  p.e_dir = {0.0, 1.0};
  Forcing f;
  f.g = [&](double) { return ScalarField(g, Region::Whole, 0.5); };
  const EnergyReport r = energy_report(s, f, p, g);
  EXPECT_NEAR(r.energy(), energy(s, p, g), 1e-12 * r.energy());
  const double expected_source =
      0.5 * integral(s.d, Region::Whole, g) + inner(s.d, restrict_to(s.v.c[1], Region::Fluid, g), Region::Fluid, g);
  EXPECT_NEAR(r.source_rate, expected_source, 1e-12 * std::abs(expected_source));
  EXPECT_GT(r.dissipation_rate, 0.0);
  EXPECT_EQ(r.gronwall_bound, r.energy());
}

TEST(Energy, GronwallFitCoversSeries) {
  std::vector<EnergyReport> series;
  EnergyReport prev;
  for (int k = 0; k <= 10; ++k) {
    EnergyReport r;
    r.t = 0.1 * k;
    r.kinetic_thermal = std::exp(0.5 * r.t) * (1.0 + 0.01 * std::sin(7.0 * k));
    if (k > 0) {
      // The running fit is what energy_report carries forward.
      r.initial_energy = prev.initial_energy;
      r.gronwall_C = std::max(prev.gronwall_C, std::log(r.energy() / r.initial_energy) / r.t);
    } else {
      r.initial_energy = r.energy();
    }
    series.push_back(r);
    prev = r;
  }
  const double C = fit_gronwall_constant(series);
  EXPECT_NEAR(C, series.back().gronwall_C, 1e-12);
  for (const auto& r : series) EXPECT_LE(r.energy(), r.gronwall_bound * (1 + 1e-14));
  EXPECT_GT(C, 0.4);
  EXPECT_LT(C, 0.7);
}

TEST(Energy, BalanceResidualConvergesInTime) {
  // Fixed grid, dt halved: the residual of dE/dt + D − S falls at order ≥ 1.
  const ShortRun a = short_mms_run(32, 0.02, 0.1), b = short_mms_run(32, 0.01, 0.1);
  EXPECT_GE(std::log2(a.balance / b.balance), 1.0) << a.balance << " " << b.balance;
}

TEST(WeakResidual, BankSatisfiesConstraints) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  const TestBank bank = make_test_bank(g);
  ASSERT_EQ(bank.velocity.size() + bank.scalar.size(), 16u);
  EXPECT_NO_THROW(check_test_bank(bank, g));
  for (std::size_t i = 0; i < bank.velocity.size(); ++i)
    for (std::size_t j = 0; j < bank.velocity.size(); ++j)
      EXPECT_NEAR(inner(bank.velocity[i], bank.velocity[j], Region::Whole, g), i == j ? 1.0 : 0.0, 1e-12);
  for (std::size_t i = 0; i < bank.scalar.size(); ++i)
    for (std::size_t j = 0; j < bank.scalar.size(); ++j)
      EXPECT_NEAR(inner(bank.scalar[i], bank.scalar[j], Region::Whole, g), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(WeakResidual, RejectsInadmissibleTests) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  TestBank bank = make_test_bank(g);
  VectorField bad(g, Region::Whole);
  bad.c[0] = sample(g, Region::Whole, [](double x, double y) { return std::sin(x) * (1 - y * y); });
  bank.velocity.push_back(bad);
  EXPECT_THROW(check_test_bank(bank, g), DiagnosticError);

  bank = make_test_bank(g);
  bank.velocity.push_back(VectorField(g, Region::Whole, 1.0));  // divergence-free but not clamped
  EXPECT_THROW(weak_residual(State::zero(g), State::zero(g, 0.1), bank, Forcing{}, Params{}, g), DiagnosticError);
}

TEST(WeakResidual, SteadyZeroState) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  const auto [r1, r2] = weak_residual(State::zero(g), State::zero(g, 0.1), make_test_bank(g), Forcing{}, Params{}, g);
  EXPECT_EQ(r1, 0.0);
  EXPECT_EQ(r2, 0.0);
}

TEST(WeakResidual, DecreasesUnderRefinement) {
  const ShortRun a = short_mms_run(16, 0.01, 0.05), b = short_mms_run(32, 0.005, 0.05),
                 c = short_mms_run(64, 0.0025, 0.05);
  EXPECT_GE(a.weak_v / b.weak_v, 1.8);
  EXPECT_GE(b.weak_v / c.weak_v, 1.8);
  EXPECT_GE(a.weak_d / b.weak_d, 1.8);
  EXPECT_GE(b.weak_d / c.weak_d, 1.8);
}

TEST(WeakResidual, PerturbationIncreasesResidual) {
  const Config cfg = mms_on(32, 16);
  const Grid g = build_grid(cfg.domain);
  SchemeConfig sc = cfg.scheme;
  sc.dt = 0.005;
  const State s0 = build_initial_state(cfg, g);
  const Forcing f = build_forcing(cfg, g);
  const auto [s1, rep] = advance_one_step(s0, f, cfg.params, sc, g);
  const TestBank bank = make_test_bank(g);
  const auto base = weak_residual(s0, s1, bank, f, cfg.params, g);

  State noisy = s1;
  const ScalarField n1 = random_band_limited(g, Region::Whole, 3), n2 = random_band_limited(g, Region::Whole, 4);
  for (std::size_t k = 0; k < n1.values.size(); ++k) {
    noisy.v.c[0].values[k] += 1e-2 * n1.values[k];
    noisy.d.values[k] += 1e-2 * n2.values[k];
  }
  const auto pert = weak_residual(s0, noisy, bank, f, cfg.params, g);
  EXPECT_GT(pert.first, base.first);
  EXPECT_GT(pert.second, base.second);
}

TEST(Compatibility, TrivialData) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  Params p;
  const CompatibilityReport zero = check_compatibility(VectorField(g, Region::Fluid), ScalarField(g, Region::Fluid),
                                                       VectorField(g, Region::Solid), ScalarField(g, Region::Solid),
                                                       p, g, 1e-12);
  EXPECT_EQ(zero.tangential_stress_residual, 0.0);
  EXPECT_EQ(zero.thermal_flux_residual, 0.0);
  EXPECT_TRUE(zero.passed);
  const CompatibilityReport c = check_compatibility(VectorField(g, Region::Fluid), ScalarField(g, Region::Fluid, 3.0),
                                                    VectorField(g, Region::Solid), ScalarField(g, Region::Solid, 3.0),
                                                    p, g, 1e-12);
  EXPECT_LE(c.thermal_flux_residual, 1e-12);
  EXPECT_TRUE(c.passed);
}

TEST(Compatibility, CompatibleQuadraticData) {
  // u₁ = a y², w₁ = (aεL/μ)(|y| − L), ρ = b y², θ = (k₁bL/k₂)(|y| − L/2) + bL²/4:
  // tractions and fluxes balance and one-sided stencils are exact on quadratics.
  const Grid g = build_grid({1.0, 16, 16, 8});
  Params p;
  p.epsilon = 0.7;
  p.mu = 1.3;
  p.k1 = 0.4;
  p.k2 = 0.9;
  const double a = 0.8, b = 0.6, L = 1.0;
  VectorField u(g, Region::Fluid), w(g, Region::Solid);
  u.c[0] = sample(g, Region::Fluid, [&](double, double y) { return a * y * y; });
  w.c[0] = sample(g, Region::Solid, [&](double, double y) { return a * p.epsilon * L / p.mu * (std::abs(y) - L); });
  const ScalarField rho = sample(g, Region::Fluid, [&](double, double y) { return b * y * y; });
  const ScalarField th = sample(g, Region::Solid, [&](double, double y) {
    return p.k1 * b * L / p.k2 * (std::abs(y) - 0.5 * L) + 0.25 * b * L * L;
  });
  const CompatibilityReport r = check_compatibility(u, rho, w, th, p, g, 1e-12);
  EXPECT_LE(r.tangential_stress_residual, 1e-12);
  EXPECT_LE(r.thermal_flux_residual, 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(Compatibility, ShearViolation) {
  const double s = 0.3;
  Params p;
  p.epsilon = 0.7;
  double prev_err = 0.0;
  for (int n : {16, 32}) {
    const Grid g = build_grid({1.0, 8, n, n / 2});
    VectorField u(g, Region::Fluid);
    // ∂u₁/∂y = s on both interface lines.
    u.c[0] = sample(g, Region::Fluid, [&](double, double y) { return s * std::sin(y) / std::cos(0.5); });
    const CompatibilityReport r = check_compatibility(u, ScalarField(g, Region::Fluid), VectorField(g, Region::Solid),
                                                      ScalarField(g, Region::Solid), p, g, 1e-8);
    const double err = std::abs(r.tangential_stress_residual - p.epsilon * s);
    EXPECT_LT(err, g.hy_f * g.hy_f * p.epsilon * s);
    EXPECT_FALSE(r.passed);
    if (prev_err > 0.0) EXPECT_GT(prev_err / err, 3.5);
    prev_err = err;
  }
}

TEST(Compatibility, ViolationDrivesInterfaceAccelerationLinearly) {
  const Grid g = build_grid({1.0, 8, 16, 8});
  Params p = zero_buoyancy();
  double mismatch[2];
  int k = 0;
  for (double r : {1e-2, 1e-1}) {
    State s = State::zero(g);
    VectorField u(g, Region::Fluid);
    u.c[0] = sample(g, Region::Fluid, [&](double, double y) { return r * (y * y - 0.25); });
    s.v = merge(u, VectorField(g, Region::Solid), g);
    const Acceleration acc = initial_acceleration(s, Forcing{}, p, g);
    double m = 0.0;
    for (int row : g.gamma_rows)
      for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(acc.vt.c[0](i, row)));
    const CompatibilityReport rep = check_compatibility(u, ScalarField(g, Region::Fluid), VectorField(g, Region::Solid),
                                                        ScalarField(g, Region::Solid), p, g, 1e-8);
    EXPECT_NEAR(rep.tangential_stress_residual, p.epsilon * r * 1.0, 1e-12);
    mismatch[k++] = m;
  }
  EXPECT_GT(mismatch[0], 0.0);
  EXPECT_NEAR(mismatch[1] / mismatch[0], 10.0, 1e-8);
}

TEST(Stability, ZeroDeltaIsDeterministic) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  SchemeConfig sc;
  sc.dt = 0.005;
  sc.T_end = 0.05;
  const StabilityRun run = stability_experiment(smooth_state(g), 0.0, Forcing{}, zero_buoyancy(), sc, g);
  ASSERT_EQ(run.series.size(), 11u);
  for (const auto& r : run.series) {
    EXPECT_EQ(r.chi_norm, 0.0);
    EXPECT_EQ(r.psi_norm, 0.0);
    EXPECT_EQ(r.F_seminorm, 0.0);
    EXPECT_GE(r.M_t, run.C_prime);
  }
}

TEST(Stability, EnvelopeAndLinearScaling) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  Params p = zero_buoyancy();
  p.e_dir = {0.0, 1.0};
  SchemeConfig sc;
  sc.dt = 0.005;
  sc.T_end = 0.2;
  const State s0 = smooth_state(g, 0.5);
  const StabilityRun a = stability_experiment(s0, 1e-6, Forcing{}, p, sc, g, 4);
  const StabilityRun b = stability_experiment(s0, 2e-6, Forcing{}, p, sc, g, 4);
  EXPECT_DOUBLE_EQ(a.C_prime, std::max({2 * p.epsilon, 2 * p.k1, 2 * p.k2, 1.0}));
  EXPECT_NEAR(std::hypot(a.series.front().chi_norm, a.series.front().psi_norm), 1e-6, 1e-15);
  for (const auto& r : a.series) {
    EXPECT_LE(r.chi_norm * r.chi_norm + r.psi_norm * r.psi_norm, r.gronwall_envelope * a.fit_slack);
    EXPECT_GE(r.M_t, a.C_prime);
  }
  const double da = std::hypot(a.series.back().chi_norm, a.series.back().psi_norm);
  const double db = std::hypot(b.series.back().chi_norm, b.series.back().psi_norm);
  EXPECT_LE(da, 1e-3);
  EXPECT_GE(db / da, 1.5);
  EXPECT_LE(db / da, 2.5);
  EXPECT_GT(a.series.back().F_seminorm, 0.0);
  for (double d : a.div_residuals) EXPECT_LE(d, 1e-10);
}

TEST(Stability, PerturbationSize) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  const State s = smooth_state(g);
  EXPECT_THROW(perturb_state(s, -1.0, g), DiagnosticError);
  const State q = perturb_state(s, 1e-3, g);
  const double dv = norm_l2(q.v - s.v, Region::Whole, g), dd = norm_l2(q.d - s.d, Region::Whole, g);
  EXPECT_NEAR(std::hypot(dv, dd), 1e-3, 1e-15);
  EXPECT_LE(divergence(restrict_to(q.v, Region::Fluid, g), g).max_abs(), 1e-10);
  for (int r : g.gamma_out_rows)
    for (int i = 0; i < g.nx(); ++i) EXPECT_EQ(q.v.c[0](i, r), s.v.c[0](i, r));
}

TEST(Regularity, TrivialCases) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  SchemeConfig sc;
  const State s = smooth_state(g);
  State later = s;
  later.t = 0.01;
  const RegularityReport steady = regularity_report(later, s, sc, Params{}, g);
  EXPECT_EQ(steady.vt_l2, 0.0);
  EXPECT_EQ(steady.dt_l2, 0.0);

  State flat = State::zero(g);
  flat.v.c[0] = sample(g, Region::Whole, [](double, double y) { return std::cos(y); });
  flat.d = sample(g, Region::Whole, [](double, double y) { return y * y; });
  const RegularityReport r = regularity_report(flat, flat, sc, Params{}, g);
  EXPECT_EQ(r.dh_v_l2, 0.0);
  EXPECT_EQ(r.dh_d_l2, 0.0);
  EXPECT_GT(r.grad_v_solid, 0.0);
  EXPECT_GT(r.h2_proxy_fluid, 0.0);
}

TEST(Regularity, BoundednessCheck) {
  std::vector<RegularityReport> series(20);
  for (std::size_t k = 0; k < series.size(); ++k) {
    auto& r = series[k];
    r.t = 0.1 * k;
    r.vt_l2 = r.dt_l2 = r.grad_v_solid = r.dh_v_l2 = r.dh_d_l2 = r.h2_proxy_fluid = r.pressure_h1 = 1.0 + 0.1 * k;
  }
  EXPECT_TRUE(check_regularity_bounded(series).passed);
  series[15].pressure_h1 = 50.0;
  const BoundednessCheck c = check_regularity_bounded(series);
  EXPECT_FALSE(c.passed);
  EXPECT_EQ(c.worst_quantity, "pressure_h1");
  EXPECT_NEAR(c.worst_ratio, 50.0 / 1.1, 1e-12);
}

TEST(Regularity, SmoothRunStaysBounded) {
  const Config cfg = mms_on(16, 8);
  const Grid g = build_grid(cfg.domain);
  State s = build_initial_state(cfg, g);
  const Forcing f = build_forcing(cfg, g);
  SchemeConfig sc = cfg.scheme;
  sc.dt = 0.01;
  Stepper st(g, cfg.params, sc);
  std::vector<RegularityReport> series;
  for (int k = 0; k < 50; ++k) {
    const State prev = s;
    st.advance(s, f);
    series.push_back(regularity_report(s, prev, sc, cfg.params, g));
  }
  const BoundednessCheck c = check_regularity_bounded(series);
  EXPECT_TRUE(c.passed) << c.worst_quantity << " " << c.worst_ratio;
}

TEST(Inequalities, ConstantsStableUnderRefinement) {
  double prev_l = 0.0, prev_t = 0.0;
  for (int n : {16, 32, 64}) {
    const Grid g = build_grid({1.0, n, n, n / 2});
    const InequalityFit f = fit_inequality_constants(g, 20, 42);
    EXPECT_GT(f.ladyzhenskaya, 0.0);
    EXPECT_GT(f.trace, 0.0);
    if (prev_l > 0.0) {
      EXPECT_LT(f.ladyzhenskaya, 1.1 * prev_l);
      EXPECT_LT(f.trace, 1.1 * prev_t);
    }
    prev_l = f.ladyzhenskaya;
    prev_t = f.trace;
  }
}

TEST(Identities, ExactIdentitiesHold) {
  const Grid g = build_grid({1.0, 32, 32, 16});
  for (const auto& r : run_identity_suite(g, 9)) {
    if (r.name.find("product rule") != std::string::npos || r.name.find("D-h Dh") != std::string::npos ||
        r.name.rfind("x summation", 0) == 0)
      EXPECT_TRUE(r.passed) << r.name << " " << r.value;
  }
}

TEST(Identities, AdvectionIdentityDefectIsSecondOrder) {
  // The one-sided y closure is not summation-by-parts, so the defect is a
  // truncation error; it must vanish at second order.
  const double a = advection_identity_defect(build_grid({1.0, 16, 16, 8}), 10, 5);
  const double b = advection_identity_defect(build_grid({1.0, 32, 32, 16}), 10, 5);
  const double c = advection_identity_defect(build_grid({1.0, 64, 64, 32}), 10, 5);
  EXPECT_GT(std::log2(a / b), 1.8);
  EXPECT_GT(std::log2(b / c), 1.8);
}

TEST(RandomFields, SeededAndBandLimited) {
  const Grid g = build_grid({1.0, 16, 16, 8});
  const ScalarField a = random_band_limited(g, Region::Fluid, 7), b = random_band_limited(g, Region::Fluid, 7);
  const ScalarField c = random_band_limited(g, Region::Fluid, 8);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  // Modes above kmax = 4 are absent.
  const ScalarField d = d2dx2(d2dx2(a));
  EXPECT_LE(norm_l2(d, Region::Fluid, g), 256.0 * norm_l2(a, Region::Fluid, g));
}
