#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kingman/errors.hpp"
#include "kingman/specfun.hpp"
#include "oracles.hpp"

using namespace kingman;

TEST(BesselJ, MatchesReferenceTable) {
  for (const auto& [s, t, ref] : oracle::kBesselJ) {
    const double v = bessel_j(s, t);
    EXPECT_LE(std::abs(v - ref), 1e-12 * std::abs(ref) + 1e-14) << "J_" << s << "(" << t << ")";
  }
}

TEST(BesselJ, HalfIntegerClosedForms) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(bessel_j(-0.5, pi), -std::sqrt(2.0) / pi, 1e-15);
  EXPECT_NEAR(bessel_j(0.5, pi), 0.0, 1e-15);
  EXPECT_EQ(bessel_j(0.0, 0.0), 1.0);
}

TEST(BesselJ, ContinuousAcrossRegimes) {
  for (double s : {-0.5, 0.3, 1.0, 2.6}) {
    for (double t : {8.0, 25.0}) {
      const double a = bessel_j(s, t * (1.0 - 1e-12));
      const double b = bessel_j(s, t * (1.0 + 1e-12));
      const double slope = s / t * bessel_j(s, t) - bessel_j(s + 1.0, t);
      EXPECT_NEAR(b - a, 2e-12 * t * slope, 1e-14) << "s " << s << " t " << t;
    }
  }
}

TEST(BesselJ, DomainErrors) {
  EXPECT_THROW(bessel_j(-0.7, 1.0), DomainError);
  EXPECT_THROW(bessel_j(0.5, -1.0), DomainError);
}

TEST(JKernel, MatchesReferenceTable) {
  for (const auto& [nu, t, ref] : oracle::kJKernel)
    EXPECT_LE(std::abs(j_kernel(nu, t) - ref), 1e-12 * std::abs(ref) + 1e-14) << "nu " << nu << " t " << t;
}

TEST(JKernel, IntegerOrdersAreElementary) {
  double worst1 = 0.0;
  double worst3 = 0.0;
  const Order o1 = make_order(1.0);
  const Order o3 = make_order(3.0);
  for (int k = 0; k <= 10000; ++k) {
    const double t = 50.0 * k / 10000.0;
    worst1 = std::max(worst1, std::abs(j_kernel(o1, t) - std::cos(t)));
    worst3 = std::max(worst3, std::abs(j_kernel(o3, t) - (t == 0.0 ? 1.0 : std::sin(t) / t)));
  }
  EXPECT_LE(worst1, 1e-10);
  EXPECT_LE(worst3, 1e-10);
  EXPECT_NEAR(j_kernel(1.0, 2.0), std::cos(2.0), 1e-15);
  EXPECT_NEAR(j_kernel(3.0, 2.0), std::sin(2.0) / 2.0, 1e-15);
  EXPECT_EQ(j_kernel(2.7, 0.0), 1.0);
}

TEST(Constants, GammaBetaKappaC) {
  EXPECT_NEAR(gamma_fn(0.3), oracle::kGamma03, 1e-14 * oracle::kGamma03);
  EXPECT_NEAR(gamma_fn(4.5), oracle::kGamma45, 1e-14 * oracle::kGamma45);
  EXPECT_NEAR(beta_fn(0.75, 1.25), oracle::kBeta075_125, 1e-14);
  EXPECT_NEAR(kappa_of(2.7), oracle::kKappa27, 1e-14);
  EXPECT_NEAR(c_of(1.5), oracle::kC15, 1e-14);
  EXPECT_NEAR(c_of(1.0), std::numbers::pi, 1e-14);
  EXPECT_NEAR(kappa_of(2.0), 1.0, 1e-15);
}

TEST(Constants, OrderBelowOneIsRejected) {
  EXPECT_THROW(make_order(0.5), DomainError);
  EXPECT_THROW(make_order(NAN), DomainError);
  EXPECT_NO_THROW(make_order(1.0));
}

TEST(Arccosh, StableNearOne) {
  EXPECT_EQ(arccosh_stable(1.0), 0.0);
  EXPECT_NEAR(arccosh_stable(std::cosh(3.0)), 3.0, 1e-14);
  EXPECT_NEAR(arccosh1p(1e-12), oracle::kAcosh1p1e12, 1e-12 * oracle::kAcosh1p1e12);
  EXPECT_EQ(arccosh_stable(1.0 - 1e-14), 0.0);
}
