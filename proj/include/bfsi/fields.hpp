#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bfsi/geometry.hpp"

namespace bfsi {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  double epsilon = 1.0;
  double mu = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  Vec2 e_dir{0.0, 1.0};
  double L = 1.0;

  void validate() const;
};

// Values are stored row-major with x fastest: values[local_row * Nx + i].
struct ScalarField {
  Region region = Region::Whole;
  int nx = 0;
  int rows = 0;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(const Grid& g, Region r, double fill = 0.0);

  double& operator()(int i, int l) { return values[static_cast<std::size_t>(l) * nx + i]; }
  double operator()(int i, int l) const { return values[static_cast<std::size_t>(l) * nx + i]; }
  double* row(int l) { return values.data() + static_cast<std::size_t>(l) * nx; }
  const double* row(int l) const { return values.data() + static_cast<std::size_t>(l) * nx; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  double max_abs() const;
  bool all_finite() const;
  bool same_shape(const ScalarField& o) const {
    return region == o.region && nx == o.nx && rows == o.rows;
  }
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

struct VectorField {
  ScalarField c[2];

  VectorField() = default;
  VectorField(const Grid& g, Region r, double fill = 0.0) : c{ScalarField(g, r, fill), ScalarField(g, r, fill)} {}
  Region region() const { return c[0].region; }
  ScalarField& operator[](int k) { return c[k]; }
  const ScalarField& operator[](int k) const { return c[k]; }
  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  double max_abs() const;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

struct State {
  double t = 0.0;
  VectorField v;  // whole: u on the fluid, Φ = w_t on the solid
  ScalarField d;  // whole: ρ on the fluid, θ on the solid
  VectorField w;  // solid displacement
  ScalarField p;  // fluid pressure

  static State zero(const Grid& g, double t = 0.0);
};

struct Forcing {
  std::function<VectorField(double)> f;  // whole: f1 on the fluid, f3 on the solid
  std::function<ScalarField(double)> g;  // whole: f2 on the fluid, f4 on the solid

  VectorField f_at(double t, const Grid& grid) const;
  ScalarField g_at(double t, const Grid& grid) const;
};

// Field sampled from a pointwise function of (x, y).
ScalarField sample(const Grid& g, Region r, const std::function<double(double, double)>& fn);

// Region-local copy of a field whose region covers r.
ScalarField restrict_to(const ScalarField& f, Region r, const Grid& g);
VectorField restrict_to(const VectorField& f, Region r, const Grid& g);

// Whole-strip field from fluid and solid parts. Interface rows take the
// half-cell weighted average of both sides.
ScalarField merge(const ScalarField& fluid, const ScalarField& solid, const Grid& g);
VectorField merge(const VectorField& fluid, const VectorField& solid, const Grid& g);

// Writes the rows of a region field into the matching rows of a whole field.
void scatter_into(ScalarField& whole, const ScalarField& part, const Grid& g);

bool covers(Region field_region, Region r);

double inner(const ScalarField& a, const ScalarField& b, Region r, const Grid& g);
double inner(const VectorField& a, const VectorField& b, Region r, const Grid& g);
double integral(const ScalarField& a, Region r, const Grid& g);

double norm_l2(const ScalarField& f, Region r, const Grid& g);
double norm_l2(const VectorField& f, Region r, const Grid& g);
double norm_h1_semi(const ScalarField& f, Region r, const Grid& g);
double norm_h1_semi(const VectorField& f, Region r, const Grid& g);
double norm_h1(const ScalarField& f, Region r, const Grid& g);
double norm_h1(const VectorField& f, Region r, const Grid& g);
double norm_l4(const ScalarField& f, Region r, const Grid& g);
double norm_l4(const VectorField& f, Region r, const Grid& g);
double trace_norm(const ScalarField& f, Boundary b, int exponent, const Grid& g);
double trace_norm(const VectorField& f, Boundary b, int exponent, const Grid& g);

// H1 inner product of the gradients, consistent with norm_h1_semi:
// spectral x-derivative at nodes, cell differences in y.
double grad_inner(const ScalarField& a, const ScalarField& b, Region r, const Grid& g);
double grad_inner(const VectorField& a, const VectorField& b, Region r, const Grid& g);

}  // namespace bfsi
