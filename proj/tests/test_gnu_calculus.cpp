#include <gtest/gtest.h>

#include <cmath>

#include "kingman/errors.hpp"
#include "kingman/gnu_calculus.hpp"
#include "kingman/verification.hpp"
#include "oracles.hpp"

using namespace kingman;

namespace {

PlaneGrid two_path_plane(double nu) {
  return build_plane(build_grid(nu, 20.0, 200, GridLayout::composite, {10, 0.0, 2.0}), 2.0, 21);
}

}  // namespace

TEST(Psi, MatchesReferenceValues) {
  for (const auto& [t, xi, ref] : oracle::kPsi) {
    const PsiValue v = psi_eval(t, xi);
    EXPECT_NEAR(v.value, ref, 1e-10 * std::abs(ref) + 1e-14) << "t " << t << " xi " << xi;
    EXPECT_LT(v.error, 1e-8);
  }
}

TEST(Psi, FloorIsEnforced) {
  EXPECT_THROW(psi_eval(0.04, 1.0), NonConvergent);
  EXPECT_THROW(psi_eval(-1.0, 1.0), DomainError);
  EXPECT_THROW(psi_eval(1.0, 0.0), DomainError);
}

TEST(Psi, WeightIsNormalizedAndBounded) {
  for (double t : {0.5, 1.0, 2.0, 3.0, 6.0}) {
    const PsiWeight w = build_psi_weight(t);
    // ∫∫ Ψ_t(ξ) e^{−cosh u/ξ} dξ du with ∫ e^{−cosh u/ξ} du = 2K₀(1/ξ).
    const double mass = w.integrate([](double xi) { return 2.0 * std::cyl_bessel_k(0.0, 1.0 / xi); });
    EXPECT_NEAR(mass, 1.0, 1e-9) << "t " << t;
    EXPECT_TRUE(std::isfinite(w.bound));
    EXPECT_GT(w.bound, 0.0);
  }
}

TEST(MFunction, ZeroFrequencyIsTheLineHeatKernel) {
  for (const auto& [t, u, ref] : oracle::kMZero) {
    EXPECT_NEAR(m_function(t, u, 0.0), ref, 1e-10) << "t " << t << " u " << u;
    EXPECT_NEAR(ref, std::exp(-u * u / (4.0 * t)) / std::sqrt(4.0 * M_PI * t), 1e-15);
  }
}

TEST(MFunction, DecaysMonotonically) {
  const PsiWeight w = build_psi_weight(1.0);
  double prev = m_function(w, 0.0, 1.0);
  for (double l = 2.0; l <= 512.0; l *= 2.0) {
    const double m = m_function(w, 0.0, l);
    EXPECT_LT(m, prev);
    EXPECT_GE(m, 0.0);
    prev = m;
  }
  EXPECT_LT(prev, 1e-3 * m_function(w, 0.0, 0.0));
}

TEST(MFunction, WeightedSquareIntegrable) {
  const PsiWeight w = build_psi_weight(1.0);
  double s = 0.0;
  for (double l = 0.005; l < 4000.0; l += 0.01) s += 0.01 * std::pow(m_function(w, 0.0, l), 2) * l;
  EXPECT_TRUE(std::isfinite(s));
  EXPECT_GT(s, 0.0);
}

TEST(GHeat, PointValuesBothPaths) {
  for (const auto& [nu, t, x, u, ref] : oracle::kGHeat) {
    const Order o = make_order(nu);
    EXPECT_NEAR(g_heat_value_contour(o, t, x, u), ref, 1e-11 * ref) << "nu " << nu << " t " << t;
    if (t >= kPsiTMin) {
      const PsiWeight w = build_psi_weight(t);
      EXPECT_NEAR(g_heat_value(o, w, x, u), ref, 1e-9 * ref) << "nu " << nu << " t " << t;
    }
  }
}

TEST(GHeat, ContourAgreesWithPsiRelativeToPeak) {
  const Order o = make_order(2.0);
  for (double t : {0.15, 0.5, 2.0}) {
    const PsiWeight w = build_psi_weight(t);
    const double peak = g_heat_value_contour(o, t, 0.0, 0.0);
    for (double x : {0.0, 0.5, 2.0, 6.0})
      for (double u : {-2.0, 0.0, 1.0})
        EXPECT_NEAR(g_heat_value(o, w, x, u), g_heat_value_contour(o, t, x, u), 1e-6 * peak);
  }
}

TEST(GHeat, SmallTimeContourTracksPeak) {
  const Order o = make_order(2.0);
  const double t = 0.01;
  const double peak = g_heat_value_contour(o, t, 0.0, 0.0);
  // Near the identity the kernel is Euclidean to leading order.
  EXPECT_NEAR(peak * std::pow(4.0 * M_PI * t, 0.5 * (2.0 + 1.0)) / (2.0 * M_PI), 1.0, 2e-2);
  for (double r : {0.1, 0.3})
    EXPECT_NEAR(g_heat_radial(o, t, r), g_heat_value_contour(o, t, 0.0, r) * std::exp(r), 1e-12 * peak);
}

TEST(GHeat, MassAndPositivity) {
  for (double nu : {1.0, 2.7}) {
    const Order o = make_order(nu);
    const HeatKernelResult k = g_heat_kernel(o, 1.0, heat_plane(nu, 1.0), HeatMethod::psi);
    EXPECT_NEAR(k.field.integral(), 1.0, 1e-3);
    EXPECT_GE(k.min_value, -1e-8);
    EXPECT_EQ(k.n_negative, 0u);
  }
}

TEST(GHeat, TwoPaths) {
  const Order o = make_order(2.0);
  const PsiWeight w = build_psi_weight(1.0);
  const PlaneGrid pl = two_path_plane(2.0);
  const KernelField a = heat_kernel_via_multiplier(o, w, pl);
  const KernelField b = g_heat_kernel(o, 1.0, pl, HeatMethod::psi).field;
  double d = 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    d = std::max(d, std::abs(a.values[i] - b.values[i]));
    m = std::max(m, std::abs(b.values[i]));
  }
  EXPECT_LE(d / m, 1e-4);
}

TEST(GHeat, RejectsNonPositiveTime) {
  const Order o = make_order(2.0);
  EXPECT_THROW(g_heat_value_contour(o, 0.0, 1.0, 0.0), DomainError);
}

TEST(Multiplier, SingleExponentialIsTheHeatKernel) {
  const Order o = make_order(2.0);
  const PlaneGrid pl = two_path_plane(2.0);
  ExpMixMultiplier F;
  F.terms = {{1.0, 1.0}};
  const KernelField a = multiplier_kernel(o, F, pl);
  const KernelField b = g_heat_kernel(o, 1.0, pl).field;
  for (std::size_t i = 0; i < a.values.size(); ++i) ASSERT_NEAR(a.values[i], b.values[i], 1e-14);
}

TEST(Multiplier, PathsAgreeAndKernelIsRadial) {
  const Order o = make_order(2.0);
  const PlaneGrid pl = two_path_plane(2.0);
  ExpMixMultiplier F;
  F.terms = {{1.0, 1.0}, {-1.0, 2.0}};
  const KernelField lin = multiplier_kernel(o, F, pl, MultiplierPath::linearity);
  const KernelField tra = multiplier_kernel(o, F, pl, MultiplierPath::transference);
  EXPECT_LE(relative_lp_error(tra, lin, 2.0), 1e-6);
  // m^{1/2} K on u-nodes at equal distance from the identity.
  const double r = 1.0;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double u : {-0.6, -0.2, 0.0, 0.2, 0.6}) {
    const double x = std::sqrt(2.0 * std::exp(u) * (std::cosh(r) - std::cosh(u)));
    const double v = std::exp(u) * lin.value_at(x, u);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_LE((hi - lo) / std::abs(hi), 1e-5);
}

TEST(Multiplier, ValidationRejectsBadMixtures) {
  ExpMixMultiplier F;
  F.terms = {{1.0, -1.0}};
  EXPECT_THROW(F.validate(), DomainError);
  F.terms = {{1.0, 1.0}, {2.0, 1.0}};
  EXPECT_THROW(F.validate(), DomainError);
}

TEST(Projection, DictionaryMemberIsRecovered) {
  std::vector<double> lam;
  std::vector<double> val;
  for (int i = 0; i <= 400; ++i) {
    lam.push_back(std::pow(10.0, -2.0 + 4.0 * i / 400.0));
    val.push_back(std::exp(-3.0 * lam.back()));
  }
  const ExpMixMultiplier F = project_to_expmix(lam, val, 5, 0.75, 12.0);
  EXPECT_LT(F.residual, 1e-10);
  double dominant = 0.0;
  double rest = 0.0;
  for (const auto& [c, t] : F.terms) {
    if (std::abs(t - 3.0) < 1e-12) dominant = c;
    else rest = std::max(rest, std::abs(c));
  }
  EXPECT_NEAR(dominant, 1.0, 1e-8);
  EXPECT_LT(rest, 1e-8);
}

TEST(Projection, CompletelyMonotoneResidualDecreases) {
  std::vector<double> lam;
  std::vector<double> val;
  std::vector<double> osc;
  for (int i = 0; i <= 400; ++i) {
    lam.push_back(std::pow(10.0, -2.0 + 4.0 * i / 400.0));
    val.push_back(std::pow(1.0 + lam.back(), -2.0));
    osc.push_back(std::exp(-lam.back()) * std::cos(lam.back()));
  }
  double prev = INFINITY;
  for (int n : {4, 8, 16}) {
    const double r = project_to_expmix(lam, val, n, 0.01, 100.0).residual;
    EXPECT_LT(r, prev) << n << " terms";
    prev = r;
  }
  const ExpMixMultiplier g = project_to_expmix(lam, osc, 12, 0.01, 100.0);
  EXPECT_TRUE(std::isfinite(g.residual));
}

TEST(Projection, IllConditionedDictionary) {
  std::vector<double> lam{0.0, 1.0, 2.0};
  std::vector<double> val{1.0, 0.5, 0.25};
  ProjectionOptions opt;
  opt.ridge = 0.0;
  opt.max_condition = 10.0;
  EXPECT_THROW(project_to_expmix(lam, val, 6, 1.0, 1.001, opt), IllConditioned);
}

TEST(Plancherel, RadialNormMatchesField) {
  const Order o = make_order(2.0);
  ExpMixMultiplier F;
  F.terms = {{1.0, 1.0}};
  const HeatKernelResult k = g_heat_kernel(o, 1.0, heat_plane(2.0, 1.0), HeatMethod::contour);
  EXPECT_NEAR(expmix_kernel_l2sq(o, F) / std::pow(k.field.l2(), 2), 1.0, 1e-4);
  EXPECT_EQ(expmix_kernel_l2sq(o, ExpMixMultiplier{}), 0.0);
}

TEST(Plancherel, DensityFollowsIntegerExponents) {
  for (double nu : {2.0, 3.0}) {
    const PlancherelEstimate e = estimate_plancherel(make_order(nu));
    EXPECT_LE(e.ratio_max / e.ratio_min, 20.0);
    EXPECT_NEAR(e.slope_small, 0.5, 0.1) << "nu " << nu;
    EXPECT_NEAR(e.slope_large, 0.5 * (nu - 1.0), 0.1) << "nu " << nu;
    for (std::size_t i = 1; i < e.lambda.size(); ++i) EXPECT_GT(e.lambda[i], e.lambda[i - 1]);
  }
}
