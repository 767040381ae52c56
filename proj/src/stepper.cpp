#include "bfsi/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bfsi/banded.hpp"
#include "bfsi/operators.hpp"
#include "bfsi/parallel.hpp"
#include "bfsi/pressure.hpp"
#include "bfsi/spectral.hpp"

namespace bfsi {

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepError("dt must be positive");
  if (!(T_end >= 0.0) || !std::isfinite(T_end)) throw StepError("T_end must be nonnegative");
  if (T_end > 0.0 && dt > T_end * (1.0 + 1e-12)) throw StepError("dt must not exceed T_end");
  if (!(diffusion_theta >= 0.5 && diffusion_theta <= 1.0)) throw StepError("diffusion_theta must lie in [1/2, 1]");
  if (!(coupling_tol > 0.0)) throw StepError("coupling_tol must be positive");
  if (max_substeps < 1) throw StepError("max_substeps must be at least 1");
  if (T_end > 0.0 && T_end / dt > 1e7) throw StepError("more than 1e7 steps requested");
}

namespace {

struct Modes {
  int rows = 0, nk = 0;
  std::vector<cplx> c;
  Modes() = default;
  Modes(int r, int k) : rows(r), nk(k), c(static_cast<std::size_t>(r) * k) {}
  cplx& at(int r, int k) { return c[static_cast<std::size_t>(r) * nk + k]; }
  cplx at(int r, int k) const { return c[static_cast<std::size_t>(r) * nk + k]; }
};

Modes forward(const ScalarField& f) {
  Modes m(f.rows, f.nx / 2 + 1);
  rfft_rows(f.nx, f.rows, f.values.data(), m.c.data());
  return m;
}

void backward(Modes m, ScalarField& f) {
  for (int r = 0; r < m.rows; ++r) m.at(r, m.nk - 1) = 0.0;  // Nyquist mode is not advanced
  irfft_rows(f.nx, f.rows, m.c.data(), f.values.data());
}

// Row bookkeeping of the whole strip shared by the assembly and the loads.
struct Layout {
  int R = 0, a = 0, b = 0, nf = 0;
  double hf = 0.0, hs = 0.0;
  std::vector<double> Wt, Wf, Ws;  // by whole row
  std::vector<int> i1, i2, iq;     // velocity-system unknowns by whole row, -1 if absent
  int n = 0;

  bool fluid_cell(int r) const { return r >= a && r < b; }
  double cell_h(int r) const { return fluid_cell(r) ? hf : hs; }
  bool fluid_row(int r) const { return r >= a && r <= b; }

  explicit Layout(const Grid& g) {
    R = g.whole_rows();
    a = g.gamma_rows[0];
    b = g.gamma_rows[1];
    nf = g.fluid_rows();
    hf = g.hy_f;
    hs = g.hy_s;
    Wt = g.y_weights(Region::Whole);
    Wf = g.whole_y_weights(Region::Fluid);
    Ws = g.whole_y_weights(Region::Solid);
    i1.assign(R, -1);
    i2.assign(R, -1);
    iq.assign(R, -1);
    for (int r = 1; r < R - 1; ++r) {
      i1[r] = n++;
      i2[r] = n++;
      if (fluid_row(r)) iq[r] = n++;
    }
  }
};

struct Triplet {
  int i, j;
  double v;
};

BandedLU from_triplets(int n, const std::vector<Triplet>& t) {
  int kl = 0, ku = 0;
  for (const auto& e : t) {
    kl = std::max(kl, e.i - e.j);
    ku = std::max(ku, e.j - e.i);
  }
  BandedLU lu(n, kl, ku);
  for (const auto& e : t) lu.add(e.i, e.j, e.v);
  lu.factor();
  return lu;
}

double keff_of(int k, int nx) { return k == nx / 2 ? 0.0 : static_cast<double>(k); }

// Laplacian with ∂yy closed at the layer ends by a second-order one-sided
// stencil (first order when a layer has fewer than four rows).
ScalarField full_laplacian(const ScalarField& f_in, Region r, double coef, const Grid& g) {
  const ScalarField f = restrict_to(f_in, r, g);
  ScalarField out = d2dx2(f);
  std::vector<std::pair<int, int>> layers;
  double h = 0.0;
  if (r == Region::Fluid) {
    layers = {{0, g.spec.Ny_f}};
    h = g.hy_f;
  } else {
    layers = {{0, g.spec.Ny_s}, {g.spec.Ny_s + 1, 2 * g.spec.Ny_s + 1}};
    h = g.hy_s;
  }
  const double c = 1.0 / (h * h);
  for (auto [lo, hi] : layers) {
    for (int l = lo + 1; l < hi; ++l)
      for (int i = 0; i < f.nx; ++i) out(i, l) += c * (f(i, l + 1) - 2 * f(i, l) + f(i, l - 1));
    const bool four = hi - lo >= 3;
    for (int side = 0; side < 2; ++side) {
      const int l0 = side ? hi : lo, s = side ? -1 : 1;
      for (int i = 0; i < f.nx; ++i) {
        const double d2 = four ? 2 * f(i, l0) - 5 * f(i, l0 + s) + 4 * f(i, l0 + 2 * s) - f(i, l0 + 3 * s)
                               : f(i, l0) - 2 * f(i, l0 + s) + f(i, l0 + 2 * s);
        out(i, l0) += c * d2;
      }
    }
  }
  out *= coef;
  return out;
}

// Explicit loads in row-force units (already multiplied by the row mass),
// including the interface boundary terms ½(u·n)u and ½(u·n)ρ.
struct Loads {
  VectorField mom;
  ScalarField heat;
};

}  // namespace

InterfaceResidual interface_residual(const State& s, const Params& prm, const Grid& g) {
  const ScalarField u1 = restrict_to(s.v.c[0], Region::Fluid, g), u2 = restrict_to(s.v.c[1], Region::Fluid, g);
  const ScalarField rho = restrict_to(s.d, Region::Fluid, g);
  const ScalarField u1y = ddy(u1, Region::Fluid, g), u2y = ddy(u2, Region::Fluid, g), rhoy = ddy(rho, Region::Fluid, g);
  const ScalarField w1y = ddy(s.w.c[0], Region::Solid, g), w2y = ddy(s.w.c[1], Region::Solid, g);
  const ScalarField thy = ddy(s.d, Region::Solid, g);
  InterfaceResidual out;
  for (int side = 0; side < 2; ++side) {
    const int fl = side ? g.spec.Ny_f : 0;
    const int sl = side ? g.spec.Ny_s + 1 : g.spec.Ny_s;
    const double n = side ? 1.0 : -1.0;
    for (int i = 0; i < g.nx(); ++i) {
      const double un = n * u2(i, fl);
      const double sx = n * (prm.epsilon * u1y(i, fl) - prm.mu * w1y(i, sl)) - 0.5 * un * u1(i, fl);
      const double sy = n * (prm.epsilon * u2y(i, fl) - prm.mu * w2y(i, sl)) - n * s.p(i, fl) - 0.5 * un * u2(i, fl);
      const double fx = n * (prm.k1 * rhoy(i, fl) - prm.k2 * thy(i, sl)) - 0.5 * un * rho(i, fl);
      out.stress = std::max(out.stress, std::hypot(sx, sy));
      out.flux = std::max(out.flux, std::abs(fx));
    }
  }
  return out;
}

void validate_state(const State& s, const Grid& g) {
  auto shape = [&](const ScalarField& f, Region r, const char* what) {
    if (f.region != r || f.nx != g.nx() || f.rows != g.rows(r))
      throw StepError(std::string("state field ") + what + " does not match the grid");
    if (!f.all_finite()) throw StepError(std::string("state field ") + what + " has non-finite values");
  };
  shape(s.v.c[0], Region::Whole, "v.x");
  shape(s.v.c[1], Region::Whole, "v.y");
  shape(s.d, Region::Whole, "d");
  shape(s.w.c[0], Region::Solid, "w.x");
  shape(s.w.c[1], Region::Solid, "w.y");
  shape(s.p, Region::Fluid, "p");
  const double scale = std::max(1.0, s.w.max_abs());
  for (int c = 0; c < 2; ++c)
    for (int l : {0, 2 * g.spec.Ny_s + 1})
      for (int i = 0; i < g.nx(); ++i)
        if (std::abs(s.w.c[c](i, l)) > 1e-12 * scale) throw StepError("displacement must vanish on the outer lines");
}

double project_state_velocity(State& s, const Grid& g) {
  const auto Wt = g.y_weights(Region::Whole);
  std::vector<double> W(g.fluid_rows());
  for (int j = 0; j < g.fluid_rows(); ++j) W[j] = Wt[g.gamma_rows[0] + j];
  const VectorField u = restrict_to(s.v, Region::Fluid, g);
  const Projection pr = project_weighted(u, W, g);
  double change = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < u.c[c].values.size(); ++k)
      change = std::max(change, std::abs(pr.u.c[c].values[k] - u.c[c].values[k]));
    scatter_into(s.v.c[c], pr.u.c[c], g);
  }
  return change;
}

Acceleration initial_acceleration(const State& s, const Forcing& forcing, const Params& prm, const Grid& g) {
  validate_state(s, g);
  const VectorField u = restrict_to(s.v, Region::Fluid, g);
  const double div = divergence(u, g).max_abs();
  if (div > 1e-8 * std::max(1.0, u.max_abs() / g.hy_f)) throw StepError("initial velocity is not divergence-free");
  const ScalarField rho = restrict_to(s.d, Region::Fluid, g);
  const VectorField f = forcing.f_at(s.t, g);
  const ScalarField gf = forcing.g_at(s.t, g);
  const VectorField adv = advect(u, u, g);
  const VectorField gp = gradient(s.p, Region::Fluid, g);
  const double e[2] = {prm.e_dir.a, prm.e_dir.b};

  VectorField af(g, Region::Fluid), as(g, Region::Solid);
  for (int c = 0; c < 2; ++c) {
    af.c[c] = full_laplacian(u.c[c], Region::Fluid, prm.epsilon, g);
    af.c[c] -= adv.c[c];
    af.c[c] -= gp.c[c];
    af.c[c] += restrict_to(f.c[c], Region::Fluid, g);
    for (std::size_t k = 0; k < rho.values.size(); ++k) af.c[c].values[k] += e[c] * rho.values[k];
    as.c[c] = full_laplacian(s.w.c[c], Region::Solid, prm.mu, g);
    as.c[c] += restrict_to(f.c[c], Region::Solid, g);
  }
  ScalarField df = full_laplacian(rho, Region::Fluid, prm.k1, g);
  df -= advect(u, rho, g);
  df += restrict_to(gf, Region::Fluid, g);
  ScalarField ds = full_laplacian(s.d, Region::Solid, prm.k2, g);
  ds += restrict_to(gf, Region::Solid, g);

  Acceleration out;
  out.vt = merge(af, as, g);
  out.dt = merge(df, ds, g);
  out.vt_l2 = norm_l2(out.vt, Region::Whole, g);
  out.dt_l2 = norm_l2(out.dt, Region::Whole, g);
  return out;
}

struct Stepper::Impl {
  Grid g;
  Params prm;
  SchemeConfig sc;
  Layout lay;
  std::vector<std::vector<StencilEntry>> D;
  std::vector<double> qnull;  // W_f⁻¹ z over fluid rows
  std::vector<BandedLU> vel, heat;
  bool have_prev = false;
  Loads prev;

  Impl(const Grid& grid, const Params& p, const SchemeConfig& s) : g(grid), prm(p), sc(s), lay(grid) {
    prm.validate();
    sc.validate();
    D = ddy_matrix(lay.nf, g.hy_f);
    const auto z = ddy_left_null(lay.nf, g.hy_f);
    const auto wf = g.y_weights(Region::Fluid);
    qnull.resize(lay.nf);
    for (int j = 0; j < lay.nf; ++j) qnull[j] = z[j] / wf[j];
    const int nk = g.nx() / 2 + 1;
    vel.resize(nk);
    heat.resize(nk);
    parallel_for(nk, [&](int k) {
      vel[k] = assemble_velocity(keff_of(k, g.nx()));
      heat[k] = assemble_heat(keff_of(k, g.nx()));
    });
  }

  BandedLU assemble_velocity(double k) const {
    const double dt = sc.dt, th = sc.diffusion_theta;
    const double eps = prm.epsilon, mu = prm.mu;
    const bool singular = k == 0.0;
    std::vector<char> pinned(lay.n, 0);
    if (sc.freeze_fluid)
      for (int r = lay.a; r <= lay.b; ++r) pinned[lay.i1[r]] = pinned[lay.i2[r]] = pinned[lay.iq[r]] = 1;
    if (singular && !sc.freeze_fluid) pinned[lay.iq[lay.a]] = 1;  // gauge row replaces a redundant constraint
    std::vector<Triplet> t;
    auto add = [&](int i, int j, double v) {
      if (i < 0 || j < 0 || pinned[i]) return;
      t.push_back({i, j, v});
    };
    for (int r = 1; r < lay.R - 1; ++r) {
      const double diag = lay.Wt[r] / dt + th * eps * k * k * lay.Wf[r] + 0.25 * dt * mu * k * k * lay.Ws[r];
      add(lay.i1[r], lay.i1[r], diag);
      add(lay.i2[r], lay.i2[r], diag);
    }
    for (int r = 0; r + 1 < lay.R; ++r) {
      const double c = lay.fluid_cell(r) ? th * eps / lay.hf : 0.25 * dt * mu / lay.hs;
      for (const auto& idx : {&lay.i1, &lay.i2}) {
        const int p = (*idx)[r], q = (*idx)[r + 1];
        add(p, p, c);
        add(q, q, c);
        add(p, q, -c);
        add(q, p, -c);
      }
    }
    const auto wf = g.y_weights(Region::Fluid);
    for (int j = 0; j < lay.nf; ++j) {
      const int m = lay.a + j, qm = lay.iq[m];
      add(qm, lay.i1[m], k * wf[j]);
      add(lay.i1[m], qm, k * wf[j]);
      for (const auto& e : D[j]) {
        const int col = lay.i2[lay.a + e.col];
        add(qm, col, -wf[j] * e.coef);
        add(col, qm, -wf[j] * e.coef);
      }
    }
    for (int i = 0; i < lay.n; ++i)
      if (pinned[i]) t.push_back({i, i, 1.0});
    return from_triplets(lay.n, t);
  }

  BandedLU assemble_heat(double k) const {
    const double dt = sc.dt, th = sc.diffusion_theta;
    std::vector<Triplet> t;
    for (int r = 0; r < lay.R; ++r)
      t.push_back({r, r, lay.Wt[r] / dt + th * k * k * (prm.k1 * lay.Wf[r] + prm.k2 * lay.Ws[r])});
    for (int r = 0; r + 1 < lay.R; ++r) {
      const double c = th * (lay.fluid_cell(r) ? prm.k1 / lay.hf : prm.k2 / lay.hs);
      t.push_back({r, r, c});
      t.push_back({r + 1, r + 1, c});
      t.push_back({r, r + 1, -c});
      t.push_back({r + 1, r, -c});
    }
    return from_triplets(lay.R, t);
  }

  Loads explicit_loads(const State& s) const {
    Loads out{VectorField(g, Region::Whole), ScalarField(g, Region::Whole)};
    const VectorField u = restrict_to(s.v, Region::Fluid, g);
    const ScalarField rho = restrict_to(s.d, Region::Fluid, g);
    const VectorField adv = advect(u, u, g);
    const ScalarField advr = advect(u, rho, g);
    const auto wf = g.y_weights(Region::Fluid);
    const double e[2] = {prm.e_dir.a, prm.e_dir.b};
    const int nx = g.nx(), kmax = dealias_kmax(nx);
    for (int j = 0; j < lay.nf; ++j) {
      const int r = lay.a + j;
      for (int i = 0; i < nx; ++i) {
        for (int c = 0; c < 2; ++c) out.mom.c[c](i, r) = wf[j] * (e[c] * rho(i, j) - adv.c[c](i, j));
        out.heat(i, r) = -wf[j] * advr(i, j);
      }
    }
    std::vector<double> line(nx);
    for (int side = 0; side < 2; ++side) {
      const int j = side ? lay.nf - 1 : 0, r = lay.a + j;
      const double n = side ? 1.0 : -1.0;
      for (int c = 0; c < 3; ++c) {
        const ScalarField& q = c < 2 ? u.c[c] : rho;
        for (int i = 0; i < nx; ++i) line[i] = 0.5 * n * u.c[1](i, j) * q(i, j);
        truncate_row(nx, line.data(), kmax);
        ScalarField& dst = c < 2 ? out.mom.c[c] : out.heat;
        for (int i = 0; i < nx; ++i) dst(i, r) += line[i];
      }
    }
    return out;
  }

  static Loads combine(const Loads& x, double a, const Loads* y, double b) {
    Loads out = x;
    out.mom *= a;
    out.heat *= a;
    if (y) {
      out.mom += b * y->mom;
      out.heat += b * y->heat;
    }
    return out;
  }

  void add_forcing(Loads& ld, const Forcing& fo, double t0, double t1) const {
    const VectorField f0 = fo.f_at(t0, g), f1 = fo.f_at(t1, g);
    const ScalarField g0 = fo.g_at(t0, g), g1 = fo.g_at(t1, g);
    for (int r = 0; r < lay.R; ++r)
      for (int i = 0; i < g.nx(); ++i) {
        const double m = 0.5 * lay.Wt[r];
        for (int c = 0; c < 2; ++c) ld.mom.c[c](i, r) += m * (f0.c[c](i, r) + f1.c[c](i, r));
        ld.heat(i, r) += m * (g0(i, r) + g1(i, r));
      }
  }

  // One implicit solve from s with the given loads.
  State solve(const State& s, const Loads& ld) const {
    State out = s;
    out.t = s.t + sc.dt;
    const int nx = g.nx(), nk = nx / 2 + 1, R = lay.R;
    const double dt = sc.dt, th = sc.diffusion_theta;

    if (!sc.freeze_heat) {
      const Modes Dm = forward(s.d), Lm = forward(ld.heat);
      Modes Dn(R, nk);
      parallel_for(nk, [&](int k) {
        const double kk = keff_of(k, nx);
        std::vector<double> rhs(2 * R);
        for (int r = 0; r < R; ++r) {
          cplx kd = kk * kk * (prm.k1 * lay.Wf[r] + prm.k2 * lay.Ws[r]) * Dm.at(r, k);
          if (r > 0) kd += (lay.fluid_cell(r - 1) ? prm.k1 / lay.hf : prm.k2 / lay.hs) * (Dm.at(r, k) - Dm.at(r - 1, k));
          if (r + 1 < R) kd += (lay.fluid_cell(r) ? prm.k1 / lay.hf : prm.k2 / lay.hs) * (Dm.at(r, k) - Dm.at(r + 1, k));
          const cplx b = lay.Wt[r] / dt * Dm.at(r, k) - (1.0 - th) * kd + Lm.at(r, k);
          rhs[r] = b.real();
          rhs[R + r] = b.imag();
        }
        heat[k].solve(rhs.data(), 2);
        for (int r = 0; r < R; ++r) Dn.at(r, k) = {rhs[r], rhs[R + r]};
      });
      backward(Dn, out.d);
    }

    if (!sc.freeze_flow) {
      const Modes V[2] = {forward(s.v.c[0]), forward(s.v.c[1])};
      const Modes Wl[2] = {forward(s.w.c[0]), forward(s.w.c[1])};
      const Modes L[2] = {forward(ld.mom.c[0]), forward(ld.mom.c[1])};
      std::vector<int> srow(R, -1);  // whole row -> solid local row
      for (int r = 0; r < R; ++r)
        if (r <= lay.a) srow[r] = r;
        else if (r >= lay.b) srow[r] = g.spec.Ny_s + 1 + (r - lay.b);
      Modes Vn[2] = {Modes(R, nk), Modes(R, nk)};
      Modes Qn(lay.nf, nk);
      parallel_for(nk, [&](int k) {
        const double kk = keff_of(k, nx);
        const int n = lay.n;
        std::vector<double> rhs(2 * n, 0.0);
        std::vector<cplx> base(R), x(R);
        for (int c = 0; c < 2; ++c) {
          // x = w + dt/4 Φ on solid rows
          for (int r = 0; r < R; ++r)
            x[r] = srow[r] >= 0 ? Wl[c].at(srow[r], k) + 0.25 * dt * V[c].at(r, k) : cplx(0.0);
          for (int r = 1; r < R - 1; ++r) {
            cplx kf = 0.0, ks = kk * kk * lay.Ws[r] * x[r];
            if (lay.fluid_row(r)) kf = kk * kk * lay.Wf[r] * V[c].at(r, k);
            for (int nb : {r - 1, r + 1}) {
              const int cell = std::min(r, nb);
              if (lay.fluid_cell(cell)) kf += (V[c].at(r, k) - V[c].at(nb, k)) / lay.hf;
              else ks += (x[r] - x[nb]) / lay.hs;
            }
            base[r] = lay.Wt[r] / dt * V[c].at(r, k) - (1.0 - th) * prm.epsilon * kf - prm.mu * ks + L[c].at(r, k);
            if (sc.freeze_fluid && lay.fluid_row(r)) base[r] = V[c].at(r, k);
            // The x-component is solved for Ṽ1 = -i V1 so the mode system is real.
            const cplx b = c == 0 ? cplx(0.0, -1.0) * base[r] : base[r];
            const int idx = c == 0 ? lay.i1[r] : lay.i2[r];
            rhs[idx] = b.real();
            rhs[n + idx] = b.imag();
          }
        }
        vel[k].solve(rhs.data(), 2);
        for (int r = 1; r < R - 1; ++r) {
          const cplx t1{rhs[lay.i1[r]], rhs[n + lay.i1[r]]};
          Vn[0].at(r, k) = cplx(0.0, 1.0) * t1;
          Vn[1].at(r, k) = {rhs[lay.i2[r]], rhs[n + lay.i2[r]]};
        }
        std::vector<double> qr(lay.nf), qi(lay.nf);
        for (int j = 0; j < lay.nf; ++j) {
          const int idx = lay.iq[lay.a + j];
          qr[j] = rhs[idx];
          qi[j] = rhs[n + idx];
        }
        if (kk == 0.0) {
          remove_null(qr);
          remove_null(qi);
        }
        for (int j = 0; j < lay.nf; ++j) Qn.at(j, k) = {qr[j], qi[j]};
      });
      for (int c = 0; c < 2; ++c) backward(Vn[c], out.v.c[c]);
      if (!sc.freeze_fluid) {
        ScalarField q(g, Region::Fluid);
        backward(Qn, q);
        out.p = physical_pressure(q);
      }
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < R; ++r) {
          if (srow[r] < 0) continue;
          for (int i = 0; i < nx; ++i)
            out.w.c[c](i, srow[r]) = s.w.c[c](i, srow[r]) + 0.5 * dt * (s.v.c[c](i, r) + out.v.c[c](i, r));
        }
      for (int c = 0; c < 2; ++c)
        for (int l : {0, 2 * g.spec.Ny_s + 1})
          for (int i = 0; i < nx; ++i) out.w.c[c](i, l) = 0.0;
    }
    return out;
  }

  // The multiplier is fixed up to the alternating null vector in the modes
  // without x-derivative; take the representative with the least interior
  // roughness (rows next to the interfaces carry a closure offset).
  void remove_null(std::vector<double>& q) const {
    const int n = lay.nf;
    if (n < 9) return;
    double qq = 0.0, pq = 0.0;
    for (int j = 3; j <= n - 4; ++j) {
      const double a = qnull[j + 1] - 2 * qnull[j] + qnull[j - 1];
      const double b = q[j + 1] - 2 * q[j] + q[j - 1];
      qq += a * a;
      pq += a * b;
    }
    if (qq <= 0.0) return;
    const double beta = -pq / qq;
    for (int j = 0; j < n; ++j) q[j] += beta * qnull[j];
  }

  // The multiplier carries the collocated y-checkerboard and, in the two rows
  // next to each interface, the offset of the one-sided divergence closure.
  // The physical pressure is the (1/4, 1/2, 1/4)-filtered multiplier, with
  // the three rows nearest each interface extrapolated from filtered rows
  // that do not see the closure.
  ScalarField physical_pressure(const ScalarField& q) const {
    const int n = lay.nf;
    ScalarField p = pressure_filter_y(q, g);
    if (n < 12) return p;
    const ScalarField f = p;
    for (int i = 0; i < q.nx; ++i) {
      const double lo[3] = {f(i, 3), f(i, 4), f(i, 5)};
      const double hi[3] = {f(i, n - 4), f(i, n - 5), f(i, n - 6)};
      p(i, 0) = 10 * lo[0] - 15 * lo[1] + 6 * lo[2];
      p(i, 1) = 6 * lo[0] - 8 * lo[1] + 3 * lo[2];
      p(i, 2) = 3 * lo[0] - 3 * lo[1] + lo[2];
      p(i, n - 1) = 10 * hi[0] - 15 * hi[1] + 6 * hi[2];
      p(i, n - 2) = 6 * hi[0] - 8 * hi[1] + 3 * hi[2];
      p(i, n - 3) = 3 * hi[0] - 3 * hi[1] + hi[2];
    }
    return p;
  }

  void check_cfl(const State& s) const {
    const double umax = restrict_to(s.v, Region::Fluid, g).max_abs();
    const double c = umax * sc.dt / g.hx;
    if (c > 0.8) throw CflError("CFL number " + std::to_string(c) + " exceeds 0.8");
  }

  StepReport advance(State& s, const Forcing& fo) {
    validate_state(s, g);
    if (!sc.freeze_fluid && !sc.freeze_flow) check_cfl(s);
    Loads e0 = explicit_loads(s);
    StepReport rep;
    State next;
    if (sc.adv_scheme == AdvScheme::AB2 && have_prev) {
      Loads ld = combine(e0, 1.5, &prev, -0.5);
      add_forcing(ld, fo, s.t, s.t + sc.dt);
      next = solve(s, ld);
      rep.solver_iterations = 1;
    } else {
      Loads ld = e0;
      add_forcing(ld, fo, s.t, s.t + sc.dt);
      const State pred = solve(s, ld);
      Loads ld2 = combine(e0, 0.5, nullptr, 0.0);
      const Loads e1 = explicit_loads(pred);
      ld2.mom += 0.5 * e1.mom;
      ld2.heat += 0.5 * e1.heat;
      add_forcing(ld2, fo, s.t, s.t + sc.dt);
      next = solve(s, ld2);
      rep.solver_iterations = 2;
    }
    prev = std::move(e0);
    have_prev = true;
    s = std::move(next);
    if (!s.v.c[0].all_finite() || !s.v.c[1].all_finite() || !s.d.all_finite()) throw StepError("non-finite state after solve");
    rep.t_new = s.t;
    rep.div_residual = divergence(restrict_to(s.v, Region::Fluid, g), g).max_abs();
    const auto ir = interface_residual(s, prm, g);
    rep.interface_residual = std::max(ir.stress, ir.flux);
    return rep;
  }
};

Stepper::Stepper(const Grid& g, const Params& params, const SchemeConfig& scheme)
    : impl_(std::make_unique<Impl>(g, params, scheme)) {}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

StepReport Stepper::advance(State& s, const Forcing& forcing) { return impl_->advance(s, forcing); }
void Stepper::reset_history() { impl_->have_prev = false; }

std::pair<State, StepReport> advance_one_step(const State& state, const Forcing& forcing, const Params& params,
                                              const SchemeConfig& scheme, const Grid& g) {
  Stepper st(g, params, scheme);
  State s = state;
  const StepReport rep = st.advance(s, forcing);
  return {std::move(s), rep};
}

int step_count(const SchemeConfig& scheme) {
  if (scheme.T_end <= 0.0) return 0;
  return static_cast<int>(std::ceil(scheme.T_end / scheme.dt - 1e-9));
}

RunResult run_simulation(const State& state0, const Forcing& forcing, const Params& params, const SchemeConfig& scheme,
                         const Grid& g, const std::vector<Observer>& observers) {
  scheme.validate();
  RunResult res;
  res.final_state = state0;
  const int steps = step_count(scheme);
  StepReport r0;
  r0.t_new = state0.t;
  for (const auto& ob : observers) ob.fn(0, res.final_state, r0);
  if (steps == 0) return res;
  SchemeConfig sc = scheme;
  sc.dt = scheme.T_end / steps;
  Stepper st(g, params, sc);
  res.reports.reserve(steps);
  for (int n = 1; n <= steps; ++n) {
    StepReport rep;
    try {
      rep = st.advance(res.final_state, forcing);
    } catch (const CflError& e) {
      throw CflError("step " + std::to_string(n) + ": " + e.what());
    } catch (const std::exception& e) {
      throw StepError("step " + std::to_string(n) + ": " + e.what());
    }
    res.reports.push_back(rep);
    for (const auto& ob : observers)
      if (ob.every > 0 && n % ob.every == 0) ob.fn(n, res.final_state, rep);
  }
  return res;
}

}  // namespace bfsi
