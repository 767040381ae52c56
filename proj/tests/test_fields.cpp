#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bfsi/fields.hpp"

using namespace bfsi;

namespace {

const double kPi = std::numbers::pi;

// Brute-force midpoint quadrature over [0, 2π) × (y0, y1).
double fine_quadrature(const std::function<double(double, double)>& fn, double y0, double y1, int nx = 2000,
                       int ny = 2000) {
  const double hx = 2 * kPi / nx, hy = (y1 - y0) / ny;
  double s = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) s += fn((i + 0.5) * hx, y0 + (j + 0.5) * hy);
  return s * hx * hy;
}

}  // namespace

TEST(Norms, L2OfConstantOnFluid) {
  const Grid g = build_grid({1.0, 16, 8, 4});
  const ScalarField one(g, Region::Fluid, 1.0);
  EXPECT_NEAR(norm_l2(one, Region::Fluid, g), std::sqrt(2 * kPi), 1e-14);
  EXPECT_NEAR(norm_l2(one, Region::Fluid, g), 2.5066, 1e-4);
  EXPECT_EQ(norm_l2(ScalarField(g, Region::Fluid), Region::Fluid, g), 0.0);
}

TEST(Norms, L2OfSineMatchesFineQuadrature) {
  const Grid g = build_grid({1.0, 16, 8, 4});
  const auto f = sample(g, Region::Fluid, [](double x, double) { return std::sin(x); });
  const double oracle = std::sqrt(fine_quadrature([](double x, double) { return std::sin(x) * std::sin(x); }, -0.5, 0.5, 4000, 4));
  EXPECT_NEAR(norm_l2(f, Region::Fluid, g), oracle, 1e-10);
  EXPECT_NEAR(oracle, std::sqrt(kPi), 1e-10);
}

TEST(Norms, WholeEqualsFluidPlusSolid) {
  const Grid g = build_grid({1.3, 16, 10, 4});
  const auto f = sample(g, Region::Whole, [](double x, double y) { return std::cos(x) + y * y; });
  const double a = norm_l2(f, Region::Fluid, g), b = norm_l2(f, Region::Solid, g), c = norm_l2(f, Region::Whole, g);
  EXPECT_NEAR(c * c, a * a + b * b, 1e-12);
  EXPECT_THROW(norm_l2(ScalarField(g, Region::Fluid), Region::Solid, g), FieldError);
}

TEST(Norms, H1SemiExamples) {
  const Grid g = build_grid({1.0, 16, 8, 4});
  EXPECT_NEAR(norm_h1_semi(ScalarField(g, Region::Fluid, 3.0), Region::Fluid, g), 0.0, 1e-13);
  const auto y = sample(g, Region::Fluid, [](double, double y) { return y; });
  EXPECT_NEAR(norm_h1_semi(y, Region::Fluid, g), std::sqrt(2 * kPi * 1.0), 1e-13);
  const auto s = sample(g, Region::Fluid, [](double x, double) { return std::sin(x); });
  const double oracle = std::sqrt(fine_quadrature([](double x, double) { return std::cos(x) * std::cos(x); }, -0.5, 0.5, 4000, 4));
  EXPECT_NEAR(norm_h1_semi(s, Region::Fluid, g), oracle, 1e-10);
}

TEST(Norms, L4Examples) {
  const Grid g = build_grid({1.0, 32, 32, 8});
  EXPECT_NEAR(norm_l4(ScalarField(g, Region::Fluid, 1.0), Region::Fluid, g), std::pow(2 * kPi, 0.25), 1e-14);
  EXPECT_NEAR(norm_l4(ScalarField(g, Region::Fluid, 1.0), Region::Fluid, g), 1.5832, 1e-4);
  EXPECT_EQ(norm_l4(ScalarField(g, Region::Fluid), Region::Fluid, g), 0.0);
  auto fn = [](double x, double y) { return 1.0 + 0.5 * std::sin(x) * std::cos(3 * y) + 0.3 * std::cos(2 * x) * y * y; };
  const auto f = sample(g, Region::Fluid, fn);
  const double oracle = std::pow(fine_quadrature([&](double x, double y) { return std::pow(fn(x, y), 4); }, -0.5, 0.5, 400, 400), 0.25);
  EXPECT_NEAR(norm_l4(f, Region::Fluid, g) / oracle, 1.0, 0.01);
}

TEST(Norms, TraceExamples) {
  const Grid g = build_grid({1.0, 64, 8, 4});
  EXPECT_NEAR(trace_norm(ScalarField(g, Region::Fluid, 1.0), Boundary::Gamma, 2, g), std::sqrt(4 * kPi), 1e-13);
  EXPECT_EQ(trace_norm(ScalarField(g, Region::Whole), Boundary::Gamma, 3, g), 0.0);
  const auto s = sample(g, Region::Whole, [](double x, double) { return std::sin(x); });
  double line = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) line += std::pow(std::abs(std::sin((i + 0.5) * 2 * kPi / n)), 3);
  const double oracle = std::cbrt(2 * line * 2 * kPi / n);
  EXPECT_NEAR(trace_norm(s, Boundary::Gamma, 3, g), oracle, 1e-6 * oracle);
  EXPECT_NEAR(trace_norm(s, Boundary::GammaOut, 3, g), oracle, 1e-6 * oracle);
  EXPECT_THROW(trace_norm(ScalarField(g, Region::Fluid), Boundary::GammaOut, 2, g), FieldError);
  EXPECT_THROW(trace_norm(s, Boundary::Gamma, 5, g), FieldError);
}

TEST(Norms, L2IsHomogeneousAndSubadditive) {
  const Grid g = build_grid({1.0, 16, 8, 4});
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 25; ++trial) {
    ScalarField a(g, Region::Whole), b(g, Region::Whole);
    for (auto& v : a.values) v = nd(rng);
    for (auto& v : b.values) v = nd(rng);
    const double s = nd(rng);
    EXPECT_NEAR(norm_l2(s * a, Region::Whole, g), std::abs(s) * norm_l2(a, Region::Whole, g), 1e-12 * (1 + std::abs(s)));
    EXPECT_LE(norm_l2(a + b, Region::Whole, g), norm_l2(a, Region::Whole, g) + norm_l2(b, Region::Whole, g) + 1e-12);
  }
}

TEST(Fields, MergeKeepsContinuousInterfaceValues) {
  const Grid g = build_grid({1.0, 8, 4, 2});
  auto fn = [](double x, double y) { return std::sin(x) + y; };
  const auto m = merge(sample(g, Region::Fluid, fn), sample(g, Region::Solid, fn), g);
  const auto direct = sample(g, Region::Whole, fn);
  for (std::size_t k = 0; k < m.values.size(); ++k) EXPECT_NEAR(m.values[k], direct.values[k], 1e-15);
}

TEST(Params, Validation) {
  Params p;
  EXPECT_NO_THROW(p.validate());
  p.e_dir = {0.6, 0.8};
  EXPECT_NO_THROW(p.validate());
  p.e_dir = {0.0, 0.0};
  EXPECT_NO_THROW(p.validate());
  p.e_dir = {1.0, 1e-5};
  EXPECT_THROW(p.validate(), FieldError);
  p = Params{};
  p.k2 = 0.0;
  EXPECT_THROW(p.validate(), FieldError);
}
