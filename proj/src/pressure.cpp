#include "bfsi/pressure.hpp"

#include <cmath>

#include "bfsi/banded.hpp"
#include "bfsi/operators.hpp"
#include "bfsi/spectral.hpp"

namespace bfsi {
namespace {

struct Modes {
  int nx = 0, rows = 0, nk = 0;
  std::vector<cplx> c;
  cplx& at(int l, int k) { return c[static_cast<std::size_t>(l) * nk + k]; }
};

Modes to_modes(const ScalarField& f) {
  Modes m{f.nx, f.rows, f.nx / 2 + 1, {}};
  m.c.resize(static_cast<std::size_t>(m.rows) * m.nk);
  rfft_rows(f.nx, f.rows, f.values.data(), m.c.data());
  return m;
}

void from_modes(const Modes& m, ScalarField& f) { irfft_rows(m.nx, m.rows, m.c.data(), f.values.data()); }

std::vector<cplx> line_modes(const std::vector<double>& line, int nx) {
  if (static_cast<int>(line.size()) != nx) throw FieldError("boundary data must have Nx entries");
  std::vector<cplx> out(nx / 2 + 1);
  rfft(nx, line.data(), out.data());
  return out;
}

double fluid_mean(const ScalarField& f, const Grid& g) {
  return integral(f, Region::Fluid, g) / (2.0 * M_PI * g.spec.L);
}

// Second differences over interior rows, used to pick the least rough
// representative along a null direction.
double roughness_coupling(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 1; j + 1 < a.size(); ++j) s += (a[j + 1] - 2 * a[j] + a[j - 1]) * (b[j + 1] - 2 * b[j] + b[j - 1]);
  return s;
}

}  // namespace

ScalarField solve_poisson(const PoissonProblem& pb, const Grid& g) {
  if (pb.rhs.region != Region::Fluid) throw FieldError("Poisson right-hand side must be a fluid field");
  const int nx = g.nx(), n = g.fluid_rows(), nk = nx / 2 + 1;
  const double h = g.hy_f;
  std::array<std::vector<double>, 2> bc = pb.bc_data;
  for (auto& line : bc)
    if (line.empty()) line.assign(nx, 0.0);

  if (pb.bc_kind == BcKind::Neumann) {
    double flux = 0.0, scale = 0.0;
    for (int s = 0; s < 2; ++s)
      for (double v : bc[s]) {
        flux += g.hx * v;
        scale += g.hx * std::abs(v);
      }
    const double src = integral(pb.rhs, Region::Fluid, g);
    scale += std::abs(src) + norm_l2(pb.rhs, Region::Fluid, g);
    if (std::abs(src + flux) > 1e-10 * std::max(1.0, scale))
      throw SolveError("incompatible Neumann data: source and boundary flux do not balance");
  }

  Modes r = to_modes(pb.rhs);
  const auto b0 = line_modes(bc[0], nx), b1 = line_modes(bc[1], nx);
  Modes out = r;
  for (int k = 0; k < nk; ++k) {
    const double keff = (k == nx / 2) ? 0.0 : k;
    const double k2 = keff * keff;
    BandedLU a(n, 1, 1);
    std::vector<double> rhs(2 * n, 0.0);
    const double c = 1.0 / (h * h);
    for (int j = 1; j < n - 1; ++j) {
      a.add(j, j - 1, c);
      a.add(j, j, -2.0 * c - k2);
      a.add(j, j + 1, c);
      rhs[j] = -r.at(j, k).real();
      rhs[n + j] = -r.at(j, k).imag();
    }
    if (pb.bc_kind == BcKind::Dirichlet) {
      a.add(0, 0, 1.0);
      a.add(n - 1, n - 1, 1.0);
      rhs[0] = b0[k].real();
      rhs[n] = b0[k].imag();
      rhs[n - 1] = b1[k].real();
      rhs[2 * n - 1] = b1[k].imag();
    } else {
      const bool singular = keff == 0.0;
      if (singular) {
        a.add(0, 0, 1.0);
      } else {
        a.add(0, 0, -1.0 / h - 0.5 * h * k2);
        a.add(0, 1, 1.0 / h);
        rhs[0] = -0.5 * h * r.at(0, k).real() - b0[k].real();
        rhs[n] = -0.5 * h * r.at(0, k).imag() - b0[k].imag();
      }
      a.add(n - 1, n - 2, 1.0 / h);
      a.add(n - 1, n - 1, -1.0 / h - 0.5 * h * k2);
      rhs[n - 1] = -0.5 * h * r.at(n - 1, k).real() - b1[k].real();
      rhs[2 * n - 1] = -0.5 * h * r.at(n - 1, k).imag() - b1[k].imag();
    }
    a.factor();
    a.solve(rhs.data(), 2);
    for (int j = 0; j < n; ++j) out.at(j, k) = {rhs[j], rhs[n + j]};
  }
  ScalarField p(g, Region::Fluid);
  from_modes(out, p);
  if (pb.bc_kind == BcKind::Neumann) {
    const double m = fluid_mean(p, g);
    for (auto& v : p.values) v -= m;
  }
  return p;
}

Projection project_weighted(const VectorField& vec, const std::vector<double>& W, const Grid& g) {
  const VectorField in = restrict_to(vec, Region::Fluid, g);
  const int nx = g.nx(), n = g.fluid_rows(), nk = nx / 2 + 1;
  if (static_cast<int>(W.size()) != n) throw FieldError("projection weights must cover the fluid rows");
  const auto D = ddy_matrix(n, g.hy_f);
  std::vector<std::vector<StencilEntry>> Dt(n);
  for (int r = 0; r < n; ++r)
    for (const auto& e : D[r]) Dt[e.col].push_back({r, e.coef});
  const auto z = ddy_left_null(n, g.hy_f);
  std::vector<double> q(n);
  for (int j = 0; j < n; ++j) q[j] = z[j] / W[j];
  const double qq = roughness_coupling(q, q);

  Modes U1 = to_modes(in.c[0]), U2 = to_modes(in.c[1]);
  Modes Phi = U1;
  for (int k = 0; k < nk; ++k) {
    const double keff = (k == nx / 2) ? 0.0 : k;
    const bool singular = keff == 0.0;
    BandedLU a(n, 4, 4);
    for (int m = 0; m < n; ++m)
      for (const auto& ei : Dt[m])
        for (const auto& ej : Dt[m])
          if (!(singular && ei.col == 0)) a.add(ei.col, ej.col, ei.coef * ej.coef / W[m]);
    for (int j = 0; j < n; ++j)
      if (!(singular && j == 0)) a.add(j, j, keff * keff / W[j]);
    if (singular) a.add(0, 0, 1.0);
    std::vector<double> rhs(2 * n, 0.0);
    for (int j = 0; j < n; ++j) {
      cplx div = cplx(0.0, keff) * U1.at(j, k);
      for (const auto& e : D[j]) div += e.coef * U2.at(e.col, k);
      rhs[j] = -div.real();
      rhs[n + j] = -div.imag();
    }
    if (singular) rhs[0] = rhs[n] = 0.0;
    a.factor();
    a.solve(rhs.data(), 2);

    std::vector<double> phr(n), phi_(n);
    for (int j = 0; j < n; ++j) {
      phr[j] = rhs[j] / W[j];
      phi_[j] = rhs[n + j] / W[j];
    }
    if (singular && qq > 0.0) {
      const double br = -roughness_coupling(phr, q) / qq, bi = -roughness_coupling(phi_, q) / qq;
      for (int j = 0; j < n; ++j) {
        phr[j] += br * q[j];
        phi_[j] += bi * q[j];
      }
    }
    for (int j = 0; j < n; ++j) {
      const cplx ph{phr[j], phi_[j]};
      Phi.at(j, k) = ph;
      U1.at(j, k) -= cplx(0.0, keff) * ph;
      cplx dtpsi = 0.0;
      for (const auto& e : Dt[j]) dtpsi += e.coef * cplx(phr[e.col] * W[e.col], phi_[e.col] * W[e.col]);
      U2.at(j, k) += dtpsi / W[j];
    }
  }
  Projection out{VectorField(g, Region::Fluid), ScalarField(g, Region::Fluid)};
  from_modes(U1, out.u.c[0]);
  from_modes(U2, out.u.c[1]);
  from_modes(Phi, out.phi);
  const double m = fluid_mean(out.phi, g);
  for (auto& v : out.phi.values) v -= m;
  return out;
}

Projection project(const VectorField& vec, const Grid& g) { return project_weighted(vec, g.y_weights(Region::Fluid), g); }

ScalarField pressure_filter_y(const ScalarField& f_in, const Grid& g) {
  const ScalarField f = restrict_to(f_in, Region::Fluid, g);
  ScalarField out = f;
  for (int l = 1; l < f.rows - 1; ++l)
    for (int i = 0; i < f.nx; ++i) out(i, l) = 0.25 * f(i, l - 1) + 0.5 * f(i, l) + 0.25 * f(i, l + 1);
  return out;
}

double checkerboard_fraction(const ScalarField& f) {
  double alt = 0.0, total = 0.0;
  for (int i = 0; i < f.nx; ++i) {
    double s = 0.0;
    for (int l = 0; l < f.rows; ++l) {
      s += ((l % 2) ? -1.0 : 1.0) * f(i, l);
      total += f(i, l) * f(i, l);
    }
    alt += s * s / f.rows;
  }
  return total > 0.0 ? alt / total : 0.0;
}

ScalarField initial_pressure(const VectorField& u0_in, const ScalarField& rho0, const VectorField& w0,
                             const VectorField& f1_at_0, const Params& params, const Grid& g) {
  const VectorField u0 = restrict_to(u0_in, Region::Fluid, g);
  VectorField q = advect(u0, u0, g);
  const ScalarField rho = restrict_to(rho0, Region::Fluid, g);
  const VectorField f1 = restrict_to(f1_at_0, Region::Fluid, g);
  for (int c = 0; c < 2; ++c) {
    const double e = c == 0 ? params.e_dir.a : params.e_dir.b;
    for (std::size_t k = 0; k < q.c[c].values.size(); ++k)
      q.c[c].values[k] -= e * rho.values[k] + f1.c[c].values[k];
  }
  PoissonProblem pb;
  pb.rhs = divergence(q, g);
  pb.bc_kind = BcKind::Dirichlet;

  const ScalarField du2 = ddy(u0.c[1], Region::Fluid, g);
  const ScalarField dw2 = ddy(w0.c[1], Region::Solid, g);
  const int fl[2] = {0, g.spec.Ny_f};
  const int sl[2] = {g.spec.Ny_s, g.spec.Ny_s + 1};
  for (int s = 0; s < 2; ++s) {
    pb.bc_data[s].resize(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
      const double un = u0.c[1](i, fl[s]);
      // (ε∂u/∂n − μ∂w/∂n − ½(u·n)u)·n with n = (0, ±1) reduces to the y-components.
      pb.bc_data[s][i] = params.epsilon * du2(i, fl[s]) - params.mu * dw2(i, sl[s]) - 0.5 * un * un;
    }
  }
  return solve_poisson(pb, g);
}

}  // namespace bfsi
