#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kingman/errors.hpp"
#include "kingman/numerics.hpp"
#include "oracles.hpp"

using namespace kingman;

namespace {

constexpr double kPi = std::numbers::pi;

double ones_integral(const HalfLineGrid& g) {
  std::vector<double> one(g.size(), 1.0);
  return g.integrate(one);
}

}  // namespace

TEST(GaussRules, LegendreIsExactForOddDegree) {
  const GaussRule r = gauss_legendre(12);
  for (int p = 0; p <= 23; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    EXPECT_NEAR(s, exact, 1e-14) << "degree " << p;
  }
}

TEST(GaussRules, JacobiWeightsSumToBeta) {
  for (double a : {0.0, 0.5, 1.7}) {
    const GaussRule r = gauss_jacobi(10, a, 0.0);
    double s = 0.0;
    for (double w : r.weights) s += w;
    const double exact = std::pow(2.0, a + 1.0) / (a + 1.0);
    EXPECT_NEAR(s / exact, 1.0, 1e-13) << "alpha " << a;
  }
}

TEST(HalfLineGrid, IntegratesTheMeasure) {
  EXPECT_NEAR(ones_integral(build_grid(2.0, 1.0, 40, GridLayout::uniform)), 0.5, 1e-14);
  EXPECT_NEAR(ones_integral(build_grid(1.0, 10.0, 40, GridLayout::uniform)), 10.0, 1e-12);
  EXPECT_NEAR(ones_integral(build_grid(2.5, 4.0, 40, GridLayout::composite)), 12.8, 1e-12);
  EXPECT_NEAR(ones_integral(build_grid(1.5, 100.0, 200, GridLayout::geometric)),
              std::pow(100.0, 1.5) / 1.5, 1e-9);
}

TEST(HalfLineGrid, InterpolatesSmoothProfiles) {
  const HalfLineGrid g = build_grid(2.0, 10.0, 400, GridLayout::composite, {12, 0.0, 2.0});
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-g.nodes[i] * g.nodes[i]);
  for (double z : {0.0, 0.013, 0.5, 1.234, 3.9, 7.77}) EXPECT_NEAR(g.interpolate(v, z), std::exp(-z * z), 1e-10);
  EXPECT_EQ(g.interpolate(v, 11.0), 0.0);
}

TEST(HalfLineGrid, RejectsTooFewNodes) {
  EXPECT_THROW(build_grid(2.0, 1.0, 3), DomainError);
  EXPECT_THROW(build_grid(0.5, 1.0, 40), DomainError);
}

TEST(Layout, RoundTripsNames) {
  for (GridLayout l : {GridLayout::geometric, GridLayout::uniform, GridLayout::composite})
    EXPECT_EQ(parse_layout(to_string(l)), l);
  for (DecayClass d : {DecayClass::gaussian, DecayClass::exponential, DecayClass::polynomial})
    EXPECT_EQ(parse_decay_class(to_string(d)), d);
  EXPECT_THROW(parse_layout("spiral"), ParseError);
}

TEST(PlaneGrid, IntegratesProductGaussian) {
  const PlaneGrid pl = build_plane(build_grid(2.0, 8.0, 300, GridLayout::composite, {12, 0.0, 2.0}), 8.0, 161);
  std::vector<double> v(pl.size());
  for (std::size_t iu = 0; iu < pl.nu_nodes(); ++iu)
    for (std::size_t ix = 0; ix < pl.nx(); ++ix) {
      const double x = pl.x_grid.nodes[ix];
      const double u = pl.u_nodes[iu];
      v[pl.index(iu, ix)] = std::exp(-x * x - u * u);
    }
  EXPECT_NEAR(pl.integrate(v), 0.5 * std::sqrt(kPi), 1e-10);
  EXPECT_EQ(pl.u_nodes[pl.u_center()], 0.0);
}

TEST(Quadrature, HalflineClosedForms) {
  EXPECT_NEAR(integrate_halfline([](double x) { return std::exp(-x * x); }, 2.0).value, 0.5, 1e-12);
  EXPECT_NEAR(integrate_halfline([](double x) { return std::exp(-x * x / 4.0); }, 3.0).value,
              2.0 * std::sqrt(kPi), 1e-10);
  EXPECT_NEAR(integrate_halfline([](double x) { return std::exp(-x); }, 1.0, {}, DecayClass::exponential).value,
              1.0, 1e-11);
}

TEST(Quadrature, IntervalReportsCancellationScale) {
  const QuadResult r = integrate_interval([](double x) { return std::sin(x); }, 0.0, 2.0 * kPi);
  EXPECT_NEAR(r.value, 0.0, 1e-13);
  EXPECT_NEAR(r.l1, 4.0, 1e-10);
}

TEST(Quadrature, ComplexHalfline) {
  const auto f = [](double x) { return std::exp(std::complex<double>(-1.0, 1.0) * x); };
  const ComplexQuadResult r = integrate_halfline_complex(f, 1.0, {}, DecayClass::exponential);
  EXPECT_NEAR(r.value.real(), 0.5, 1e-11);
  EXPECT_NEAR(r.value.imag(), 0.5, 1e-11);
}

TEST(Quadrature, OscillatoryAgainstOracles) {
  EXPECT_NEAR(integrate_oscillatory([](double x) { return std::exp(-x); }, 1.0, 0.0, INFINITY).value, 0.5, 1e-11);
  EXPECT_NEAR(integrate_oscillatory([](double x) { return std::exp(-x * x); }, 4.0, 0.0, INFINITY).value,
              oracle::kOscGauss, 1e-11);
  EXPECT_NEAR(integrate_oscillatory([](double x) { return 1.0 / (1.0 + x * x); }, 10.0, 0.0, INFINITY).value,
              oracle::kOscLorentz, 1e-9);
}

TEST(Quadrature, SpecValidation) {
  QuadratureSpec s;
  s.rel_tol = -1.0;
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Extrapolation, WynnAcceleratesAlternatingSeries) {
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 1; k <= 14; ++k) {
    s += (k % 2 ? 1.0 : -1.0) / k;
    partial.push_back(s);
  }
  const auto [est, diff] = wynn_epsilon(partial);
  EXPECT_NEAR(est, std::log(2.0), 1e-10);
  EXPECT_LT(diff, 1e-8);
}

TEST(Resampling, MonotoneAndZeroOutside) {
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> ys{0.0, 0.1, 0.9, 1.0, 1.0};
  std::vector<double> zs;
  for (int i = 0; i <= 80; ++i) zs.push_back(-0.5 + 5.0 * i / 80.0);
  const std::vector<double> r = monotone_cubic_resample(xs, ys, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (zs[i] < 0.0 || zs[i] > 4.0) EXPECT_EQ(r[i], 0.0);
    else if (i > 0 && zs[i - 1] >= 0.0) EXPECT_GE(r[i], r[i - 1] - 1e-15);
  }
}
