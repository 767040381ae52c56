#include "bfsi/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bfsi/spectral.hpp"

namespace bfsi {

void Params::validate() const {
  if (!(epsilon > 0.0)) throw FieldError("epsilon must be positive");
  if (!(mu > 0.0)) throw FieldError("mu must be positive");
  if (!(k1 > 0.0)) throw FieldError("k1 must be positive");
  if (!(k2 > 0.0)) throw FieldError("k2 must be positive");
  // The zero vector switches buoyancy off.
  const bool off = e_dir.a == 0.0 && e_dir.b == 0.0;
  if (!off && std::abs(std::hypot(e_dir.a, e_dir.b) - 1.0) > 1e-12)
    throw FieldError("e_dir must be a unit vector or zero");
  if (!(L > 0.0)) throw FieldError("L must be positive");
}

ScalarField::ScalarField(const Grid& g, Region r, double fill)
    : region(r), nx(g.nx()), rows(g.rows(r)), values(static_cast<std::size_t>(nx) * rows, fill) {}

static void check_shape(const ScalarField& a, const ScalarField& b) {
  if (!a.same_shape(b)) throw FieldError("field shape mismatch");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_shape(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_shape(*this, o);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
  return *this;
}
ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values) v *= s;
  return *this;
}
double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}
bool ScalarField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField& VectorField::operator+=(const VectorField& o) {
  c[0] += o.c[0];
  c[1] += o.c[1];
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  c[0] -= o.c[0];
  c[1] -= o.c[1];
  return *this;
}
VectorField& VectorField::operator*=(double s) {
  c[0] *= s;
  c[1] *= s;
  return *this;
}
double VectorField::max_abs() const { return std::max(c[0].max_abs(), c[1].max_abs()); }

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

State State::zero(const Grid& g, double t) {
  State s;
  s.t = t;
  s.v = VectorField(g, Region::Whole);
  s.d = ScalarField(g, Region::Whole);
  s.w = VectorField(g, Region::Solid);
  s.p = ScalarField(g, Region::Fluid);
  return s;
}

VectorField Forcing::f_at(double t, const Grid& grid) const {
  if (!f) return VectorField(grid, Region::Whole);
  return f(t);
}

ScalarField Forcing::g_at(double t, const Grid& grid) const {
  if (!g) return ScalarField(grid, Region::Whole);
  return g(t);
}

ScalarField sample(const Grid& g, Region r, const std::function<double(double, double)>& fn) {
  ScalarField f(g, r);
  for (int l = 0; l < f.rows; ++l) {
    const double y = g.y(r, l);
    for (int i = 0; i < f.nx; ++i) f(i, l) = fn(g.x_coords[i], y);
  }
  return f;
}

bool covers(Region field_region, Region r) { return field_region == Region::Whole || field_region == r; }

ScalarField restrict_to(const ScalarField& f, Region r, const Grid& g) {
  if (f.region == r) return f;
  if (f.region != Region::Whole)
    throw FieldError(std::string("cannot restrict a ") + region_name(f.region) + " field to " + region_name(r));
  ScalarField out(g, r);
  for (int l = 0; l < out.rows; ++l) std::copy_n(f.row(g.whole_row(r, l)), f.nx, out.row(l));
  return out;
}

VectorField restrict_to(const VectorField& f, Region r, const Grid& g) {
  VectorField out;
  out.c[0] = restrict_to(f.c[0], r, g);
  out.c[1] = restrict_to(f.c[1], r, g);
  return out;
}

ScalarField merge(const ScalarField& fluid, const ScalarField& solid, const Grid& g) {
  if (fluid.region != Region::Fluid || solid.region != Region::Solid) throw FieldError("merge expects fluid and solid fields");
  ScalarField out(g, Region::Whole);
  for (int l = 0; l < solid.rows; ++l) std::copy_n(solid.row(l), solid.nx, out.row(g.whole_row(Region::Solid, l)));
  for (int l = 0; l < fluid.rows; ++l) std::copy_n(fluid.row(l), fluid.nx, out.row(g.whole_row(Region::Fluid, l)));
  const double wf = g.hy_f / (g.hy_f + g.hy_s);
  const double ws = g.hy_s / (g.hy_f + g.hy_s);
  const int s_lo = g.spec.Ny_s, s_hi = g.spec.Ny_s + 1;
  const int f_lo = 0, f_hi = g.spec.Ny_f;
  for (int i = 0; i < out.nx; ++i) {
    out(i, g.gamma_rows[0]) = wf * fluid(i, f_lo) + ws * solid(i, s_lo);
    out(i, g.gamma_rows[1]) = wf * fluid(i, f_hi) + ws * solid(i, s_hi);
  }
  return out;
}

VectorField merge(const VectorField& fluid, const VectorField& solid, const Grid& g) {
  VectorField out;
  out.c[0] = merge(fluid.c[0], solid.c[0], g);
  out.c[1] = merge(fluid.c[1], solid.c[1], g);
  return out;
}

void scatter_into(ScalarField& whole, const ScalarField& part, const Grid& g) {
  if (whole.region != Region::Whole) throw FieldError("scatter target must be a whole field");
  for (int l = 0; l < part.rows; ++l) std::copy_n(part.row(l), part.nx, whole.row(g.whole_row(part.region, l)));
}

namespace {

void require_cover(const ScalarField& f, Region r) {
  if (!covers(f.region, r))
    throw FieldError(std::string("a ") + region_name(f.region) + " field does not cover the " + region_name(r) + " region");
}

// Local row in f of whole row `w`.
int field_row(const ScalarField& f, Region r, int l, const Grid& g) {
  if (f.region == r) return l;
  return g.whole_row(r, l);
}

template <class Fn>
double weighted_sum(const ScalarField& f, Region r, const Grid& g, Fn fn) {
  require_cover(f, r);
  const auto w = g.y_weights(r);
  double total = 0.0;
  for (int l = 0; l < g.rows(r); ++l) {
    const double* row = f.row(field_row(f, r, l, g));
    double s = 0.0;
    for (int i = 0; i < f.nx; ++i) s += fn(row[i], i, l);
    total += w[l] * s;
  }
  return g.hx * total;
}

// Cells of region r as (local row a, local row a+1, spacing).
struct Cell {
  int a;
  int b;
  double h;
};

std::vector<Cell> cells(Region r, const Grid& g) {
  std::vector<Cell> out;
  auto add_range = [&](int first, int last, double h) {
    for (int l = first; l < last; ++l) out.push_back({l, l + 1, h});
  };
  const int ns = g.spec.Ny_s;
  switch (r) {
    case Region::Fluid: add_range(0, g.spec.Ny_f, g.hy_f); break;
    case Region::Solid:
      add_range(0, ns, g.hy_s);
      add_range(ns + 1, 2 * ns + 1, g.hy_s);
      break;
    case Region::Whole:
      add_range(0, g.gamma_rows[0], g.hy_s);
      add_range(g.gamma_rows[0], g.gamma_rows[1], g.hy_f);
      add_range(g.gamma_rows[1], g.whole_rows() - 1, g.hy_s);
      break;
  }
  return out;
}

}  // namespace

double inner(const ScalarField& a, const ScalarField& b, Region r, const Grid& g) {
  require_cover(b, r);
  const auto w = g.y_weights(r);
  require_cover(a, r);
  double total = 0.0;
  for (int l = 0; l < g.rows(r); ++l) {
    const double* ra = a.row(field_row(a, r, l, g));
    const double* rb = b.row(field_row(b, r, l, g));
    double s = 0.0;
    for (int i = 0; i < a.nx; ++i) s += ra[i] * rb[i];
    total += w[l] * s;
  }
  return g.hx * total;
}

double inner(const VectorField& a, const VectorField& b, Region r, const Grid& g) {
  return inner(a.c[0], b.c[0], r, g) + inner(a.c[1], b.c[1], r, g);
}

double integral(const ScalarField& a, Region r, const Grid& g) {
  return weighted_sum(a, r, g, [](double v, int, int) { return v; });
}

double norm_l2(const ScalarField& f, Region r, const Grid& g) {
  return std::sqrt(weighted_sum(f, r, g, [](double v, int, int) { return v * v; }));
}

double norm_l2(const VectorField& f, Region r, const Grid& g) {
  const double a = norm_l2(f.c[0], r, g), b = norm_l2(f.c[1], r, g);
  return std::sqrt(a * a + b * b);
}

double grad_inner(const ScalarField& a, const ScalarField& b, Region r, const Grid& g) {
  require_cover(a, r);
  require_cover(b, r);
  const int nx = a.nx;
  const auto w = g.y_weights(r);
  std::vector<double> da(nx), db(nx);
  double xs = 0.0;
  for (int l = 0; l < g.rows(r); ++l) {
    ddx_row(nx, a.row(field_row(a, r, l, g)), da.data());
    ddx_row(nx, b.row(field_row(b, r, l, g)), db.data());
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += da[i] * db[i];
    xs += w[l] * s;
  }
  double ys = 0.0;
  for (const Cell& c : cells(r, g)) {
    const double* a0 = a.row(field_row(a, r, c.a, g));
    const double* a1 = a.row(field_row(a, r, c.b, g));
    const double* b0 = b.row(field_row(b, r, c.a, g));
    const double* b1 = b.row(field_row(b, r, c.b, g));
    double s = 0.0;
    for (int i = 0; i < nx; ++i) s += (a1[i] - a0[i]) * (b1[i] - b0[i]);
    ys += s / c.h;
  }
  return g.hx * (xs + ys);
}

double grad_inner(const VectorField& a, const VectorField& b, Region r, const Grid& g) {
  return grad_inner(a.c[0], b.c[0], r, g) + grad_inner(a.c[1], b.c[1], r, g);
}

double norm_h1_semi(const ScalarField& f, Region r, const Grid& g) {
  return std::sqrt(std::max(0.0, grad_inner(f, f, r, g)));
}

double norm_h1_semi(const VectorField& f, Region r, const Grid& g) {
  return std::sqrt(std::max(0.0, grad_inner(f, f, r, g)));
}

double norm_h1(const ScalarField& f, Region r, const Grid& g) {
  const double a = norm_l2(f, r, g), b = norm_h1_semi(f, r, g);
  return std::sqrt(a * a + b * b);
}

double norm_h1(const VectorField& f, Region r, const Grid& g) {
  const double a = norm_l2(f, r, g), b = norm_h1_semi(f, r, g);
  return std::sqrt(a * a + b * b);
}

double norm_l4(const ScalarField& f, Region r, const Grid& g) {
  return std::pow(weighted_sum(f, r, g, [](double v, int, int) { return v * v * v * v; }), 0.25);
}

double norm_l4(const VectorField& f, Region r, const Grid& g) {
  require_cover(f.c[1], r);
  const auto w = g.y_weights(r);
  double total = 0.0;
  for (int l = 0; l < g.rows(r); ++l) {
    const double* a = f.c[0].row(field_row(f.c[0], r, l, g));
    const double* b = f.c[1].row(field_row(f.c[1], r, l, g));
    double s = 0.0;
    for (int i = 0; i < f.c[0].nx; ++i) {
      const double m = a[i] * a[i] + b[i] * b[i];
      s += m * m;
    }
    total += w[l] * s;
  }
  return std::pow(g.hx * total, 0.25);
}

namespace {

std::array<int, 2> boundary_rows(const ScalarField& f, Boundary b, const Grid& g) {
  const auto& whole = b == Boundary::Gamma ? g.gamma_rows : g.gamma_out_rows;
  switch (f.region) {
    case Region::Whole: return whole;
    case Region::Fluid:
      if (b == Boundary::Gamma) return {0, g.spec.Ny_f};
      break;
    case Region::Solid:
      if (b == Boundary::Gamma) return {g.spec.Ny_s, g.spec.Ny_s + 1};
      return {0, g.solid_rows() - 1};
  }
  throw FieldError(std::string("a ") + region_name(f.region) + " field has no rows on the requested boundary");
}

}  // namespace

double trace_norm(const ScalarField& f, Boundary b, int exponent, const Grid& g) {
  if (exponent < 2 || exponent > 4) throw FieldError("trace exponent must be 2, 3 or 4");
  const auto rows = boundary_rows(f, b, g);
  double s = 0.0;
  for (int r : rows) {
    const double* row = f.row(r);
    for (int i = 0; i < f.nx; ++i) s += std::pow(std::abs(row[i]), exponent);
  }
  return std::pow(g.hx * s, 1.0 / exponent);
}

double trace_norm(const VectorField& f, Boundary b, int exponent, const Grid& g) {
  if (exponent < 2 || exponent > 4) throw FieldError("trace exponent must be 2, 3 or 4");
  const auto rows = boundary_rows(f.c[0], b, g);
  double s = 0.0;
  for (int r : rows) {
    const double* a = f.c[0].row(r);
    const double* c = f.c[1].row(r);
    for (int i = 0; i < f.c[0].nx; ++i) s += std::pow(std::hypot(a[i], c[i]), exponent);
  }
  return std::pow(g.hx * s, 1.0 / exponent);
}

}  // namespace bfsi
