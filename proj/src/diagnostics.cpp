#include "bfsi/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bfsi/operators.hpp"

namespace bfsi {
namespace {

double buoyancy_work(const ScalarField& d, const VectorField& v, const Params& params, const Grid& g) {
  return params.e_dir.a * inner(d, v.c[0], Region::Fluid, g) + params.e_dir.b * inner(d, v.c[1], Region::Fluid, g);
}

void zero_rows(ScalarField& whole, const std::array<int, 2>& rows) {
  for (int r : rows) std::fill_n(whole.row(r), whole.nx, 0.0);
}

// Whole-strip velocity (∂yψ, −∂xψ) with each region's own y-derivative; the
// interface rows keep the fluid values so the fluid divergence vanishes.
VectorField curl_of(const std::function<double(double, double)>& psi, const Grid& g) {
  VectorField out(g, Region::Whole);
  for (Region r : {Region::Solid, Region::Fluid}) {
    const ScalarField s = sample(g, r, psi);
    const ScalarField u1 = ddy(s, r, g);
    ScalarField u2 = ddx(s);
    u2 *= -1.0;
    scatter_into(out.c[0], u1, g);
    scatter_into(out.c[1], u2, g);
  }
  zero_rows(out.c[0], g.gamma_out_rows);
  zero_rows(out.c[1], g.gamma_out_rows);
  return out;
}

template <class F>
void orthonormalize(std::vector<F>& fields, const Grid& g) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double c = inner(fields[i], fields[j], Region::Whole, g);
      F proj = fields[j];
      proj *= c;
      fields[i] -= proj;
    }
    const double n = std::sqrt(inner(fields[i], fields[i], Region::Whole, g));
    if (n <= 0.0) throw DiagnosticError("test bank fields are linearly dependent");
    fields[i] *= 1.0 / n;
  }
}

double fluid_divergence(const VectorField& v, const Grid& g) {
  return divergence(restrict_to(v, Region::Fluid, g), g).max_abs();
}

// Maps raw 64-bit draws to [-1, 1) identically on every platform.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

std::vector<double> legendre(int n, double s) {
  std::vector<double> p(n + 1, 1.0);
  if (n >= 1) p[1] = s;
  for (int m = 2; m <= n; ++m) p[m] = ((2 * m - 1) * s * p[m - 1] - (m - 1) * p[m - 2]) / m;
  return p;
}

VectorField random_solenoidal_fluid(const Grid& g, std::uint64_t seed) {
  const ScalarField psi = random_band_limited(g, Region::Fluid, seed);
  VectorField u(g, Region::Fluid);
  u.c[0] = ddy(psi, Region::Fluid, g);
  u.c[1] = ddx(psi);
  u.c[1] *= -1.0;
  return u;
}

}  // namespace

EnergyReport energy_report(const State& s, const Forcing& forcing, const Params& params, const Grid& g,
                           const EnergyReport* prev) {
  EnergyReport r;
  r.t = s.t;
  r.kinetic_thermal = 0.5 * (inner(s.v, s.v, Region::Whole, g) + inner(s.d, s.d, Region::Whole, g));
  r.elastic = 0.5 * params.mu * grad_inner(s.w, s.w, Region::Solid, g);
  r.dissipation_rate = params.epsilon * grad_inner(s.v, s.v, Region::Fluid, g) +
                       params.k1 * grad_inner(s.d, s.d, Region::Fluid, g) +
                       params.k2 * grad_inner(s.d, s.d, Region::Solid, g);
  r.source_rate = inner(forcing.f_at(s.t, g), s.v, Region::Whole, g) +
                  inner(forcing.g_at(s.t, g), s.d, Region::Whole, g) + buoyancy_work(s.d, s.v, params, g);
  if (prev) {
    r.initial_energy = prev->initial_energy;
    r.initial_time = prev->initial_time;
    r.gronwall_C = prev->gronwall_C;
    const double elapsed = r.t - r.initial_time;
    if (elapsed > 0.0 && r.initial_energy > 0.0 && r.energy() > r.initial_energy)
      r.gronwall_C = std::max(r.gronwall_C, std::log(r.energy() / r.initial_energy) / elapsed);
    const double dt = r.t - prev->t;
    if (dt > 0.0) {
      const double rate = (r.energy() - prev->energy()) / dt;
      r.balance_residual = std::abs(rate + 0.5 * (r.dissipation_rate + prev->dissipation_rate) -
                                    0.5 * (r.source_rate + prev->source_rate));
    }
  } else {
    r.initial_energy = r.energy();
    r.initial_time = r.t;
  }
  r.gronwall_bound = std::exp(r.gronwall_C * (r.t - r.initial_time)) * r.initial_energy;
  return r;
}

double fit_gronwall_constant(std::vector<EnergyReport>& series) {
  if (series.empty()) return 0.0;
  const double e0 = series.front().energy(), t0 = series.front().t;
  double C = 0.0;
  if (e0 > 0.0)
    for (const auto& r : series)
      if (r.t > t0 && r.energy() > e0) C = std::max(C, std::log(r.energy() / e0) / (r.t - t0));
  for (auto& r : series) {
    r.initial_energy = e0;
    r.initial_time = t0;
    r.gronwall_C = C;
    r.gronwall_bound = std::exp(C * (r.t - t0)) * e0;
  }
  return C;
}

TestBank make_test_bank(const Grid& g) {
  const double L = g.spec.L;
  TestBank bank;
  const std::function<double(double)> X[4] = {
      [](double x) { return std::cos(x); }, [](double x) { return std::sin(x); },
      [](double x) { return std::cos(2 * x); }, [](double x) { return std::sin(2 * x); }};
  for (int m = 0; m < 2; ++m)
    for (const auto& xf : X)
      bank.velocity.push_back(curl_of(
          [&, m](double x, double y) {
            const double b = L * L - y * y;
            return xf(x) * b * b * std::pow(y / L, m);
          },
          g));

  const std::function<double(double)> Xs[4] = {
      [](double) { return 1.0; }, [](double x) { return std::cos(x); }, [](double x) { return std::sin(x); },
      [](double x) { return std::cos(2 * x); }};
  for (int m = 0; m < 2; ++m)
    for (const auto& xf : Xs)
      bank.scalar.push_back(sample(g, Region::Whole, [&, m](double x, double y) {
        const double s = y / L;
        return xf(x) * (m == 0 ? 1.0 : s * s * s - 3.0 * s);
      }));
  orthonormalize(bank.velocity, g);
  orthonormalize(bank.scalar, g);
  return bank;
}

void check_test_bank(const TestBank& bank, const Grid& g) {
  for (std::size_t i = 0; i < bank.velocity.size(); ++i) {
    const VectorField& phi = bank.velocity[i];
    if (phi.region() != Region::Whole) throw DiagnosticError("velocity test fields must cover the whole strip");
    const double div = fluid_divergence(phi, g);
    if (div > 1e-8)
      throw DiagnosticError("velocity test field " + std::to_string(i) + " is not divergence-free (" +
                            std::to_string(div) + ")");
    for (int c = 0; c < 2; ++c)
      for (int r : g.gamma_out_rows)
        for (int x = 0; x < g.nx(); ++x)
          if (phi.c[c](x, r) != 0.0)
            throw DiagnosticError("velocity test field " + std::to_string(i) + " is nonzero on the outer lines");
  }
  for (const auto& chi : bank.scalar)
    if (chi.region != Region::Whole) throw DiagnosticError("scalar test fields must cover the whole strip");
}

std::pair<double, double> weak_residual(const State& before, const State& after, const TestBank& bank,
                                        const Forcing& forcing, const Params& params, const Grid& g) {
  check_test_bank(bank, g);
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) throw DiagnosticError("weak residual needs consecutive states with increasing time");

  VectorField vdot = after.v - before.v;
  vdot *= 1.0 / dt;
  ScalarField ddot = after.d - before.d;
  ddot *= 1.0 / dt;
  const VectorField f = forcing.f_at(after.t, g);
  const ScalarField gs = forcing.g_at(after.t, g);
  const VectorField u = restrict_to(after.v, Region::Fluid, g);
  const ScalarField rho = restrict_to(after.d, Region::Fluid, g);

  double r1 = 0.0, r2 = 0.0;
  for (const auto& phi : bank.velocity) {
    const VectorField pf = restrict_to(phi, Region::Fluid, g);
    const double res = inner(vdot, phi, Region::Whole, g) + params.epsilon * grad_inner(after.v, phi, Region::Fluid, g) +
                       params.mu * grad_inner(after.w, phi, Region::Solid, g) + trilinear_b(u, u, pf, Region::Fluid, g) -
                       boundary_gamma(u, u, pf, g) - buoyancy_work(rho, pf, params, g) -
                       inner(f, phi, Region::Whole, g);
    r1 = std::max(r1, std::abs(res));
  }
  for (const auto& chi : bank.scalar) {
    const ScalarField cf = restrict_to(chi, Region::Fluid, g);
    const double res = inner(ddot, chi, Region::Whole, g) + params.k1 * grad_inner(after.d, chi, Region::Fluid, g) +
                       params.k2 * grad_inner(after.d, chi, Region::Solid, g) +
                       trilinear_b(u, rho, cf, Region::Fluid, g) - boundary_gamma(u, rho, cf, g) -
                       inner(gs, chi, Region::Whole, g);
    r2 = std::max(r2, std::abs(res));
  }
  return {r1, r2};
}

CompatibilityReport check_compatibility(const VectorField& u0_in, const ScalarField& rho0_in,
                                        const VectorField& w0_in, const ScalarField& theta0_in,
                                        const Params& params, const Grid& g, double tol) {
  const VectorField u0 = restrict_to(u0_in, Region::Fluid, g);
  const ScalarField rho0 = restrict_to(rho0_in, Region::Fluid, g);
  const VectorField w0 = restrict_to(w0_in, Region::Solid, g);
  const ScalarField theta0 = restrict_to(theta0_in, Region::Solid, g);
  const ScalarField u1y = ddy(u0.c[0], Region::Fluid, g);
  const ScalarField w1y = ddy(w0.c[0], Region::Solid, g);
  const ScalarField ry = ddy(rho0, Region::Fluid, g);
  const ScalarField ty = ddy(theta0, Region::Solid, g);

  CompatibilityReport rep;
  const int fl[2] = {0, g.spec.Ny_f};
  const int sl[2] = {g.spec.Ny_s, g.spec.Ny_s + 1};
  for (int s = 0; s < 2; ++s) {
    const double n = g.normal_sign(g.gamma_rows[s]);
    for (int i = 0; i < g.nx(); ++i) {
      const double un = n * u0.c[1](i, fl[s]);
      // With a flat interface Π keeps the x-component only.
      const double tang =
          n * (params.mu * w1y(i, sl[s]) - params.epsilon * u1y(i, fl[s])) + 0.5 * un * u0.c[0](i, fl[s]);
      const double flux = n * (params.k2 * ty(i, sl[s]) - params.k1 * ry(i, fl[s])) + 0.5 * un * rho0(i, fl[s]);
      rep.tangential_stress_residual = std::max(rep.tangential_stress_residual, std::abs(tang));
      rep.thermal_flux_residual = std::max(rep.thermal_flux_residual, std::abs(flux));
    }
  }
  rep.passed = rep.tangential_stress_residual <= tol && rep.thermal_flux_residual <= tol;
  return rep;
}

State perturb_state(const State& s, double delta, const Grid& g) {
  if (!(delta >= 0.0)) throw DiagnosticError("perturbation scale must be nonnegative");
  State out = s;
  if (delta == 0.0) return out;
  const double L = g.spec.L;
  ScalarField dv = sample(g, Region::Whole, [L](double, double y) { return std::cos(0.5 * M_PI * y / L); });
  zero_rows(dv, g.gamma_out_rows);
  const ScalarField dd =
      sample(g, Region::Whole, [L](double x, double y) { return (1.0 + std::cos(x)) * std::cos(0.5 * M_PI * y / L); });
  const double n = std::sqrt(inner(dv, dv, Region::Whole, g) + inner(dd, dd, Region::Whole, g));
  for (std::size_t k = 0; k < dv.values.size(); ++k) {
    out.v.c[0].values[k] += delta / n * dv.values[k];
    out.d.values[k] += delta / n * dd.values[k];
  }
  return out;
}

StabilityRun stability_experiment(const State& state0, double delta, const Forcing& forcing, const Params& params,
                                  const SchemeConfig& scheme_in, const Grid& g, int report_every) {
  if (report_every < 1) throw DiagnosticError("report interval must be at least one step");
  SchemeConfig scheme = scheme_in;
  const int steps = step_count(scheme);
  if (steps > 0) scheme.dt = scheme.T_end / steps;

  StabilityRun run;
  run.C_prime = std::max({2 * params.epsilon, 2 * params.k1, 2 * params.k2, 1.0});
  run.fit_slack = 1.0 + 1e-12;

  State a = state0, b = perturb_state(state0, delta, g);
  Stepper sa(g, params, scheme), sb(g, params, scheme);

  auto M_of = [&](const State& s) {
    const double dh = norm_h1(s.d, Region::Fluid, g), vh = norm_h1(s.v, Region::Fluid, g);
    return run.C_prime + dh * dh + std::pow(trace_norm(s.d, Boundary::Gamma, 3, g), 3) + vh * vh +
           std::pow(trace_norm(s.v, Boundary::Gamma, 3, g), 3);
  };
  std::vector<double> M_integral;
  auto record = [&](double M_int) {
    StabilityReport r;
    r.t = a.t;
    const VectorField chi = a.v - b.v;
    const ScalarField psi = a.d - b.d;
    const VectorField F = a.w - b.w;
    r.chi_norm = norm_l2(chi, Region::Whole, g);
    r.psi_norm = norm_l2(psi, Region::Whole, g);
    r.F_seminorm = params.mu * grad_inner(F, F, Region::Solid, g);
    r.M_t = M_of(a);
    run.series.push_back(r);
    M_integral.push_back(M_int);
  };

  double M_int = 0.0, M_prev = M_of(a);
  record(0.0);
  for (int n = 1; n <= steps; ++n) {
    try {
      const StepReport ra = sa.advance(a, forcing);
      const StepReport rb = sb.advance(b, forcing);
      run.div_residuals.push_back(std::max(ra.div_residual, rb.div_residual));
    } catch (const std::exception& e) {
      throw StepError("step " + std::to_string(n) + ": " + e.what());
    }
    const double M_now = M_of(a);
    M_int += 0.5 * scheme.dt * (M_prev + M_now);
    M_prev = M_now;
    if (n % report_every == 0 || n == steps) record(M_int);
  }

  const auto& s0 = run.series.front();
  const double D0 = s0.chi_norm * s0.chi_norm + s0.psi_norm * s0.psi_norm;
  double C = 0.0;
  if (D0 > 0.0)
    for (std::size_t k = 1; k < run.series.size(); ++k) {
      const auto& r = run.series[k];
      const double D = r.chi_norm * r.chi_norm + r.psi_norm * r.psi_norm;
      if (D > D0 && M_integral[k] > 0.0) C = std::max(C, std::log(D / D0) / M_integral[k]);
    }
  run.C_fit = C;
  for (std::size_t k = 0; k < run.series.size(); ++k) run.series[k].gronwall_envelope = D0 * std::exp(C * M_integral[k]);
  return run;
}

RegularityReport regularity_report(const State& s, const State& prev, const SchemeConfig& scheme,
                                   const Params& params, const Grid& g) {
  (void)params;
  RegularityReport r;
  r.t = s.t;
  const double dt = s.t > prev.t ? s.t - prev.t : scheme.dt;
  r.vt_l2 = norm_l2(s.v - prev.v, Region::Whole, g) / dt;
  r.dt_l2 = norm_l2(s.d - prev.d, Region::Whole, g) / dt;
  r.grad_v_solid = norm_h1_semi(s.v, Region::Solid, g);
  VectorField dhv;
  dhv.c[0] = diff_quotient_x(s.v.c[0], g.hx, g);
  dhv.c[1] = diff_quotient_x(s.v.c[1], g.hx, g);
  r.dh_v_l2 = norm_l2(dhv, Region::Whole, g);
  r.dh_d_l2 = norm_l2(diff_quotient_x(s.d, g.hx, g), Region::Whole, g);
  const VectorField u = restrict_to(s.v, Region::Fluid, g);
  VectorField ux, uxx;
  for (int c = 0; c < 2; ++c) {
    ux.c[c] = ddx(u.c[c]);
    uxx.c[c] = d2dx2(u.c[c]);
  }
  r.h2_proxy_fluid = norm_l2(u, Region::Fluid, g) + norm_l2(ux, Region::Fluid, g) + norm_l2(uxx, Region::Fluid, g);
  r.pressure_h1 = norm_l2(s.p, Region::Fluid, g) + norm_h1_semi(s.p, Region::Fluid, g);
  return r;
}

BoundednessCheck check_regularity_bounded(const std::vector<RegularityReport>& series, double early_fraction,
                                          double factor) {
  BoundednessCheck out;
  if (series.empty()) return out;
  const std::size_t early =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(early_fraction * static_cast<double>(series.size()))));
  using Member = double RegularityReport::*;
  const std::pair<const char*, Member> quantities[] = {
      {"vt_l2", &RegularityReport::vt_l2},
      {"dt_l2", &RegularityReport::dt_l2},
      {"grad_v_solid", &RegularityReport::grad_v_solid},
      {"dh_v_l2", &RegularityReport::dh_v_l2},
      {"dh_d_l2", &RegularityReport::dh_d_l2},
      {"h2_proxy_fluid", &RegularityReport::h2_proxy_fluid},
      {"pressure_h1", &RegularityReport::pressure_h1}};
  for (const auto& [name, m] : quantities) {
    double early_max = 0.0, run_max = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const double v = series[k].*m;
      finite = finite && std::isfinite(v);
      if (k < early) early_max = std::max(early_max, v);
      run_max = std::max(run_max, v);
    }
    double ratio = 0.0;
    if (!finite)
      ratio = std::numeric_limits<double>::infinity();
    else if (early_max > 0.0)
      ratio = run_max / early_max;
    else if (run_max > 0.0)
      ratio = std::numeric_limits<double>::infinity();
    if (ratio > out.worst_ratio || out.worst_quantity.empty()) {
      out.worst_ratio = ratio;
      out.worst_quantity = name;
    }
    if (!(ratio < factor)) out.passed = false;
  }
  return out;
}

ScalarField random_band_limited(const Grid& g, Region r, std::uint64_t seed, int kmax, int ymax) {
  std::mt19937_64 rng(seed);
  std::vector<double> a((kmax + 1) * (ymax + 1)), b(a.size());
  for (int k = 0; k <= kmax; ++k)
    for (int m = 0; m <= ymax; ++m) {
      const double scale = 1.0 / (1.0 + k + m);
      a[k * (ymax + 1) + m] = scale * unit_draw(rng);
      b[k * (ymax + 1) + m] = k == 0 ? 0.0 : scale * unit_draw(rng);
    }
  const double half = r == Region::Fluid ? 0.5 * g.spec.L : g.spec.L;
  return sample(g, r, [&](double x, double y) {
    const auto P = legendre(ymax, y / half);
    double s = 0.0;
    for (int k = 0; k <= kmax; ++k) {
      const double c = std::cos(k * x), sn = std::sin(k * x);
      for (int m = 0; m <= ymax; ++m) s += (a[k * (ymax + 1) + m] * c + b[k * (ymax + 1) + m] * sn) * P[m];
    }
    return s;
  });
}

InequalityFit fit_inequality_constants(const Grid& g, int count, std::uint64_t seed) {
  InequalityFit fit;
  for (int i = 0; i < count; ++i) {
    const ScalarField f = random_band_limited(g, Region::Fluid, seed + static_cast<std::uint64_t>(i));
    const double l2 = norm_l2(f, Region::Fluid, g), h1 = norm_h1_semi(f, Region::Fluid, g);
    if (l2 <= 0.0) continue;
    fit.ladyzhenskaya = std::max(fit.ladyzhenskaya, norm_l4(f, Region::Fluid, g) / std::sqrt((l2 + h1) * l2));
    fit.trace = std::max(fit.trace, trace_norm(f, Boundary::Gamma, 4, g) / (l2 + h1));
  }
  return fit;
}

double advection_identity_defect(const Grid& g, int count, std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + 3 * static_cast<std::uint64_t>(i);
    const VectorField u = random_solenoidal_fluid(g, s);
    if (divergence(u, g).max_abs() > 1e-10 * std::max(1.0, u.max_abs() / g.hy_f))
      throw DiagnosticError("random stream-function velocity is not divergence-free");
    VectorField v(g, Region::Fluid);
    v.c[0] = random_band_limited(g, Region::Fluid, s + 1);
    v.c[1] = random_band_limited(g, Region::Fluid, s + 2);
    const double defect = std::abs(trilinear_b(u, v, v, Region::Fluid, g) - boundary_gamma(u, v, v, g));
    const double nv = norm_h1(v, Region::Fluid, g);
    const double scale = norm_h1(u, Region::Fluid, g) * nv * nv;
    if (scale > 0.0) worst = std::max(worst, defect / scale);
  }
  return worst;
}

std::vector<IdentityResult> run_identity_suite(const Grid& g, std::uint64_t seed, int count) {
  std::vector<IdentityResult> out;
  auto add = [&](std::string name, double value, double tol) {
    out.push_back({std::move(name), value, tol, value <= tol});
  };
  add("advection-boundary identity b(u,v,v) = 1/2 int_Gamma (u.n)|v|^2", advection_identity_defect(g, count, seed),
      1e-8);

  double product = 0.0, dq_sbp = 0.0, x_sbp = 0.0, y_sbp = 0.0;
  const Region F = Region::Fluid;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + 1000 + 2 * static_cast<std::uint64_t>(i);
    const ScalarField u = random_band_limited(g, F, s), v = random_band_limited(g, F, s + 1);
    const double h = g.hx;

    ScalarField uv = u;
    for (std::size_t k = 0; k < uv.values.size(); ++k) uv.values[k] *= v.values[k];
    const ScalarField duv = diff_quotient_x(uv, h, g), du = diff_quotient_x(u, h, g), dv = diff_quotient_x(v, h, g);
    double err = 0.0;
    for (std::size_t k = 0; k < uv.values.size(); ++k)
      err = std::max(err, std::abs(duv.values[k] - (h * du.values[k] * dv.values[k] + u.values[k] * dv.values[k] +
                                                    v.values[k] * du.values[k])));
    product = std::max(product, err * h / std::max(uv.max_abs(), 1e-300));

    const double dd = inner(du, du, F, g);
    dq_sbp = std::max(dq_sbp, std::abs(inner(u, second_diff_quotient_x(u, h, g), F, g) + dd) / dd);

    const ScalarField ux = ddx(u), vx = ddx(v);
    const double xs = std::abs(inner(ux, v, F, g) + inner(u, vx, F, g));
    x_sbp = std::max(x_sbp, xs / (norm_l2(ux, F, g) * norm_l2(v, F, g) + norm_l2(u, F, g) * norm_l2(vx, F, g)));

    const ScalarField uy = ddy(u, F, g), vy = ddy(v, F, g);
    double trace = 0.0;
    for (int l : {0, g.spec.Ny_f})
      for (int x = 0; x < g.nx(); ++x) trace += (l == 0 ? -1.0 : 1.0) * g.hx * u(x, l) * v(x, l);
    const double ys = std::abs(inner(uy, v, F, g) + inner(u, vy, F, g) - trace);
    y_sbp = std::max(y_sbp, ys / (norm_l2(uy, F, g) * norm_l2(v, F, g) + norm_l2(u, F, g) * norm_l2(vy, F, g)));
  }
  add("difference-quotient product rule", product, 1e-12);
  add("difference-quotient summation by parts (u, D-h Dh u) = -|Dh u|^2", dq_sbp, 1e-12);
  add("x summation by parts", x_sbp, 1e-12);
  add("y summation by parts with trace terms", y_sbp, 1e-10);
  return out;
}

}  // namespace bfsi
