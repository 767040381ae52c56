#include "bfsi/operators.hpp"

#include <cmath>
#include <string>

#include "bfsi/spectral.hpp"

namespace bfsi {
namespace {

struct Segment {
  int first;
  int last;
  double h;
};

std::vector<Segment> segments(Region r, const Grid& g) {
  switch (r) {
    case Region::Fluid: return {{0, g.spec.Ny_f, g.hy_f}};
    case Region::Solid: return {{0, g.spec.Ny_s, g.hy_s}, {g.spec.Ny_s + 1, 2 * g.spec.Ny_s + 1, g.hy_s}};
    case Region::Whole: break;
  }
  throw FieldError("y-derivatives are taken per subdomain; pass Fluid or Solid");
}

bool is_closure_row(Region r, int l, const Grid& g) {
  for (const auto& s : segments(r, g))
    if (l == s.first || l == s.last) return true;
  return false;
}

}  // namespace

int local_row_of(const ScalarField& f, int whole_row, const Grid& g) {
  switch (f.region) {
    case Region::Whole: return whole_row;
    case Region::Fluid: {
      const int l = whole_row - g.gamma_rows[0];
      return (l >= 0 && l < f.rows) ? l : -1;
    }
    case Region::Solid:
      if (whole_row <= g.gamma_rows[0]) return whole_row;
      if (whole_row >= g.gamma_rows[1]) return g.spec.Ny_s + 1 + (whole_row - g.gamma_rows[1]);
      return -1;
  }
  return -1;
}

ScalarField ddx(const ScalarField& f) {
  ScalarField out = f;
  for (int l = 0; l < f.rows; ++l) ddx_row(f.nx, f.row(l), out.row(l));
  return out;
}

ScalarField d2dx2(const ScalarField& f) {
  ScalarField out = f;
  for (int l = 0; l < f.rows; ++l) d2dx2_row(f.nx, f.row(l), out.row(l));
  return out;
}

ScalarField ddy(const ScalarField& f_in, Region r, const Grid& g) {
  const ScalarField f = restrict_to(f_in, r, g);
  ScalarField out(g, r);
  const int nx = f.nx;
  for (const auto& s : segments(r, g)) {
    if (s.last - s.first < 2) throw FieldError("ddy needs at least three rows per layer");
    const double c = 0.5 / s.h;
    for (int i = 0; i < nx; ++i) {
      out(i, s.first) = c * (-3.0 * f(i, s.first) + 4.0 * f(i, s.first + 1) - f(i, s.first + 2));
      out(i, s.last) = c * (3.0 * f(i, s.last) - 4.0 * f(i, s.last - 1) + f(i, s.last - 2));
    }
    for (int l = s.first + 1; l < s.last; ++l)
      for (int i = 0; i < nx; ++i) out(i, l) = c * (f(i, l + 1) - f(i, l - 1));
  }
  return out;
}

ScalarField ddy_cell(const ScalarField& f_in, Region r, const Grid& g) {
  const ScalarField f = restrict_to(f_in, r, g);
  ScalarField out(g, r);
  for (const auto& s : segments(r, g))
    for (int l = s.first; l < s.last; ++l)
      for (int i = 0; i < f.nx; ++i) out(i, l) = (f(i, l + 1) - f(i, l)) / s.h;
  return out;
}

VectorField gradient(const ScalarField& f, Region r, const Grid& g) {
  VectorField out;
  out.c[0] = ddx(restrict_to(f, r, g));
  out.c[1] = ddy(f, r, g);
  return out;
}

ScalarField divergence(const VectorField& u, const Grid& g) {
  ScalarField out = ddx(restrict_to(u.c[0], Region::Fluid, g));
  out += ddy(u.c[1], Region::Fluid, g);
  return out;
}

ScalarField laplacian(const ScalarField& f_in, Region r, double coefficient, const Grid& g) {
  const ScalarField f = restrict_to(f_in, r, g);
  ScalarField out = d2dx2(f);
  for (const auto& s : segments(r, g)) {
    const double c = 1.0 / (s.h * s.h);
    for (int l = s.first + 1; l < s.last; ++l)
      for (int i = 0; i < f.nx; ++i) out(i, l) += c * (f(i, l + 1) - 2.0 * f(i, l) + f(i, l - 1));
  }
  for (int l = 0; l < out.rows; ++l) {
    const bool closure = is_closure_row(r, l, g);
    for (int i = 0; i < f.nx; ++i) out(i, l) = closure ? 0.0 : coefficient * out(i, l);
  }
  return out;
}

VectorField laplacian(const VectorField& f, Region r, double coefficient, const Grid& g) {
  VectorField out;
  out.c[0] = laplacian(f.c[0], r, coefficient, g);
  out.c[1] = laplacian(f.c[1], r, coefficient, g);
  return out;
}

ScalarField advect(const VectorField& vel, const ScalarField& field, const Grid& g) {
  const ScalarField u1 = restrict_to(vel.c[0], Region::Fluid, g);
  const ScalarField u2 = restrict_to(vel.c[1], Region::Fluid, g);
  const ScalarField fx = ddx(restrict_to(field, Region::Fluid, g));
  const ScalarField fy = ddy(field, Region::Fluid, g);
  ScalarField out(g, Region::Fluid);
  const int kmax = dealias_kmax(g.nx());
  for (int l = 0; l < out.rows; ++l) {
    for (int i = 0; i < out.nx; ++i) out(i, l) = u1(i, l) * fx(i, l) + u2(i, l) * fy(i, l);
    truncate_row(out.nx, out.row(l), kmax);
  }
  return out;
}

VectorField advect(const VectorField& vel, const VectorField& field, const Grid& g) {
  VectorField out;
  out.c[0] = advect(vel, field.c[0], g);
  out.c[1] = advect(vel, field.c[1], g);
  return out;
}

double trilinear_b(const VectorField& u, const ScalarField& v, const ScalarField& w, Region r, const Grid& g) {
  const ScalarField u1 = restrict_to(u.c[0], r, g);
  const ScalarField u2 = restrict_to(u.c[1], r, g);
  const ScalarField vx = ddx(restrict_to(v, r, g));
  const ScalarField vy = ddy(v, r, g);
  ScalarField integrand(g, r);
  const ScalarField wr = restrict_to(w, r, g);
  for (std::size_t k = 0; k < integrand.values.size(); ++k)
    integrand.values[k] = (u1.values[k] * vx.values[k] + u2.values[k] * vy.values[k]) * wr.values[k];
  return integral(integrand, r, g);
}

double trilinear_b(const VectorField& u, const VectorField& v, const VectorField& w, Region r, const Grid& g) {
  return trilinear_b(u, v.c[0], w.c[0], r, g) + trilinear_b(u, v.c[1], w.c[1], r, g);
}

namespace {

const double* trace_row(const ScalarField& f, int whole, const Grid& g) {
  const int l = local_row_of(f, whole, g);
  if (l < 0) throw FieldError(std::string("a ") + region_name(f.region) + " field has no interface trace");
  return f.row(l);
}

}  // namespace

double boundary_gamma(const VectorField& u, const ScalarField& v, const ScalarField& w, const Grid& g) {
  double s = 0.0;
  for (int row : g.gamma_rows) {
    const double n = g.normal_sign(row);
    const double* un = trace_row(u.c[1], row, g);
    const double* vr = trace_row(v, row, g);
    const double* wr = trace_row(w, row, g);
    double line = 0.0;
    for (int i = 0; i < g.nx(); ++i) line += n * un[i] * vr[i] * wr[i];
    s += line;
  }
  return 0.5 * g.hx * s;
}

double boundary_gamma(const VectorField& u, const VectorField& v, const VectorField& w, const Grid& g) {
  return boundary_gamma(u, v.c[0], w.c[0], g) + boundary_gamma(u, v.c[1], w.c[1], g);
}

namespace {

int shift_of(double h, const Grid& g) {
  const double m = h / g.hx;
  const double mr = std::round(m);
  if (mr < 1.0 || std::abs(m - mr) > 1e-9 * std::max(1.0, mr))
    throw FieldError("difference-quotient step must be a positive multiple of hx");
  return static_cast<int>(mr);
}

}  // namespace

ScalarField diff_quotient_x(const ScalarField& f, double h, const Grid& g) {
  const int m = shift_of(h, g);
  ScalarField out = f;
  const int nx = f.nx;
  for (int l = 0; l < f.rows; ++l)
    for (int i = 0; i < nx; ++i) out(i, l) = (f((i + m) % nx, l) - f(i, l)) / h;
  return out;
}

ScalarField second_diff_quotient_x(const ScalarField& f, double h, const Grid& g) {
  const int m = shift_of(h, g);
  ScalarField out = f;
  const int nx = f.nx;
  const double h2 = h * h;
  for (int l = 0; l < f.rows; ++l)
    for (int i = 0; i < nx; ++i)
      out(i, l) = (f((i + m) % nx, l) - 2.0 * f(i, l) + f(((i - m) % nx + nx) % nx, l)) / h2;
  return out;
}

}  // namespace bfsi

#include "bfsi/banded.hpp"

namespace bfsi {

std::vector<std::vector<StencilEntry>> ddy_matrix(int rows, double h) {
  std::vector<std::vector<StencilEntry>> m(rows);
  const double c = 0.5 / h;
  m[0] = {{0, -3.0 * c}, {1, 4.0 * c}, {2, -c}};
  for (int l = 1; l < rows - 1; ++l) m[l] = {{l - 1, -c}, {l + 1, c}};
  m[rows - 1] = {{rows - 3, c}, {rows - 2, -4.0 * c}, {rows - 1, 3.0 * c}};
  return m;
}

std::vector<double> ddy_left_null(int rows, double h) {
  const auto d = ddy_matrix(rows, h);
  BandedLU a(rows, 2, 2);
  for (int r = 0; r < rows; ++r)
    for (const auto& e : d[r])
      if (e.col != 0) a.add(e.col, r, e.coef);
  a.add(0, 0, 1.0);
  a.factor();
  std::vector<double> z(rows, 0.0);
  z[0] = 1.0;
  a.solve(z.data());
  return z;
}

}  // namespace bfsi
