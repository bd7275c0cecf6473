// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kingman/bessel_hypergroup.hpp"
#include "kingman/errors.hpp"
#include "kingman/gnu_calculus.hpp"
#include "kingman/gnu_geometry.hpp"
#include "kingman/verification.hpp"

using namespace kingman;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel_l2(const RadialProfile& a, const RadialProfile& b) {
  double n = 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    n += a.grid.weights[i] * std::pow(a.values[i] - b.values[i], 2);
    d += a.grid.weights[i] * b.values[i] * b.values[i];
  }
  return std::sqrt(n / d);
}

Outcome closed_form_kernels() {
  const auto t0 = std::chrono::steady_clock::now();
  const Order o1 = make_order(1.0);
  const Order o3 = make_order(3.0);
  double e1 = 0.0;
  double e3 = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double t = 50.0 * k / 9999.0;
    e1 = std::max(e1, std::abs(j_kernel(o1, t) - std::cos(t)));
    e3 = std::max(e3, std::abs(j_kernel(o3, t) - (t == 0.0 ? 1.0 : std::sin(t) / t)));
  }
  const double secs = seconds_since(t0);
  return {std::max(e1, e3) <= 1e-10 && secs < 1.0,
          fmt("max error %.2e (<= 1e-10), %.3f s (< 1 s)", std::max(e1, e3), secs),
          {fmt("j^1 vs cos %.2e, j^3 vs sinc %.2e", e1, e3)}};
}

Outcome inversion_parseval() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  double worst = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 2.7, 3.0}) {
    const Order o = make_order(nu);
    // Gaussian profile.
    const HalfLineGrid g = build_grid(nu, 14.0, 320, GridLayout::composite, {16, 0.0, 2.0});
    const RadialProfile f = sample_profile(g, [](double y) { return std::exp(-y * y); });
    const RadialProfile H = hankel_transform(o, f, g);
    const double inv_g = rel_l2(hankel_inverse(o, H, g), f);
    const double par_g = std::abs(H.l2() - o.kappa * f.l2()) / (o.kappa * f.l2());
    // (1+y²)^{−(ν+4)/2}: algebraic decay, exponentially decaying transform.
    const double a = 0.5 * (nu + 4.0);
    std::vector<double> breaks{0.0};
    while (breaks.back() < 60.0) breaks.push_back(breaks.back() + 0.5);
    while (breaks.back() < 400.0) breaks.push_back(breaks.back() * 1.1);
    const HalfLineGrid wide = grid_from_breaks(nu, breaks, 16, GridLayout::composite);
    const HalfLineGrid spec = build_grid(nu, 32.0, 1000, GridLayout::composite, {16, 0.0, 2.0});
    const HalfLineGrid near = build_grid(nu, 20.0, 400, GridLayout::composite, {12, 0.0, 2.0});
    const auto poly = [a](double y) { return std::pow(1.0 + y * y, -a); };
    const RadialProfile p = sample_profile(wide, poly, DecayClass::polynomial);
    RadialProfile Hp = hankel_transform(o, p, spec);
    Hp.decay = DecayClass::exponential;
    const RadialProfile back = hankel_inverse(o, Hp, near);
    const double inv_p = rel_l2(back, sample_profile(near, poly, DecayClass::polynomial));
    const double par_p = std::abs(Hp.l2() - o.kappa * p.l2()) / (o.kappa * p.l2());
    worst = std::max({worst, inv_g, par_g, inv_p, par_p});
    out.details.push_back(fmt("nu=%.1f gaussian inversion %.2e parseval %.2e", nu, inv_g, par_g) +
                          fmt(", algebraic inversion %.2e parseval %.2e", inv_p, par_p));
  }
  const double secs = seconds_since(t0);
  out.pass = worst <= 1e-6 && secs < 10.0;
  out.summary = fmt("worst relative error %.2e (<= 1e-6), %.2f s (< 10 s)", worst, secs);
  return out;
}

Outcome bessel_heat() {
  Outcome out;
  double sup = 0.0;
  double mass = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 2.7, 3.0}) {
    const Order o = make_order(nu);
    for (double t : {0.25, 1.0, 2.0}) {
      const HalfLineGrid g = build_grid(nu, 12.0 * std::sqrt(t) + 4.0, 400, GridLayout::composite, {12, 0.0, 2.0});
      const HalfLineGrid sg = build_grid(nu, 12.0 / std::sqrt(t) + 4.0, 400, GridLayout::composite, {12, 0.0, 2.0});
      const BesselMultiplierKernel k = bessel_multiplier_kernel(o, [t](double l) { return std::exp(-t * l); }, sg, g);
      const RadialProfile exact = bessel_heat_kernel(o, t, g);
      double e = 0.0;
      double m = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        e = std::max(e, std::abs(k.kernel.values[i] - exact.values[i]));
        m = std::max(m, std::abs(exact.values[i]));
      }
      sup = std::max(sup, e / m);
      mass = std::max(mass, std::abs(exact.integral() - 1.0));
      mass = std::max(mass, std::abs(k.kernel.integral() - 1.0));
    }
    out.details.push_back(fmt("nu=%.1f running sup %.2e, running mass error %.2e", nu, sup, mass));
  }
  out.pass = sup <= 1e-6 && mass <= 1e-8;
  out.summary = fmt("relative sup %.2e (<= 1e-6), mass error %.2e (<= 1e-8)", sup, mass);
  return out;
}

Outcome group_heat_mass() {
  Outcome out;
  double worst = 0.0;
  double slowest = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 3.0})
    for (double t : {0.5, 1.0, 2.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      const HeatKernelResult k = g_heat_kernel(make_order(nu), t, heat_plane(nu, t), HeatMethod::psi);
      const double secs = seconds_since(t0);
      const double e = std::abs(k.field.integral() - 1.0);
      worst = std::max(worst, e);
      slowest = std::max(slowest, secs);
      out.details.push_back(fmt("nu=%.1f t=%.1f", nu, t) + fmt(" mass error %.2e, min %.2e, %.2f s", e, k.min_value, secs));
    }
  out.pass = worst <= 1e-3 && slowest < 120.0;
  out.summary = fmt("worst mass error %.2e (<= 1e-3), slowest cell %.2f s (< 120 s)", worst, slowest);
  return out;
}

Outcome two_path() {
  Outcome out;
  double worst = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 3.0}) {
    const Order o = make_order(nu);
    const PlaneGrid pl = interior_plane(nu);
    const PsiWeight psi = build_psi_weight(1.0);
    const KernelField a = heat_kernel_via_multiplier(o, psi, pl);
    const KernelField b = g_heat_kernel(o, 1.0, pl, HeatMethod::psi).field;
    double d = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      d = std::max(d, std::abs(a.values[i] - b.values[i]));
      m = std::max(m, std::abs(b.values[i]));
    }
    worst = std::max(worst, d / m);
    out.details.push_back(fmt("nu=%.1f t=1 relative sup %.2e", nu, d / m));
  }
  out.pass = worst <= 1e-4;
  out.summary = fmt("relative sup error %.2e (<= 1e-4)", worst);
  return out;
}

Outcome semigroup() {
  const auto t0 = std::chrono::steady_clock::now();
  const double nu = 2.0;
  const double t = 1.0;
  const Order o = make_order(nu);
  const PlaneGrid pl = heat_plane(nu, 2.0 * t);
  const KernelField k1 = g_heat_kernel(o, t, pl, HeatMethod::contour).field;
  const KernelField k2 = g_heat_kernel(o, 2.0 * t, pl, HeatMethod::contour).field;
  const KernelField c = g_convolve(o, k1, k1);
  std::vector<double> d(c.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(c.values[i] - k2.values[i]);
  const double l1 = pl.integrate(d);
  const double secs = seconds_since(t0);
  return {l1 <= 1e-2 && secs < 300.0, fmt("L1 distance %.2e (<= 1e-2), %.1f s (< 300 s)", l1, secs),
          {fmt("mass of K_1 conv K_1 %.8f, mass of K_2 %.8f", c.integral(), k2.integral())}};
}

double level_cov(const KernelField& K, double nu, double rho) {
  double s = 0.0;
  double s2 = 0.0;
  constexpr int n = 40;
  for (int k = 1; k < n; ++k) {
    const double u = -rho + 2.0 * rho * k / n;
    const double x = std::sqrt(2.0 * std::exp(u) * (std::cosh(rho) - std::cosh(u)));
    const double v = std::exp(0.5 * nu * u) * K.value_at(x, u);
    s += v;
    s2 += v * v;
  }
  const double mean = s / (n - 1);
  return std::sqrt(std::max(0.0, s2 / (n - 1) - mean * mean)) / std::abs(mean);
}

Outcome radiality() {
  Outcome out;
  const double nu = 2.0;
  ExpMixMultiplier F;
  F.terms = {{1.0, 0.5}, {-0.5, 1.5}};
  const KernelField K = multiplier_kernel(make_order(nu), F, interior_plane(nu), MultiplierPath::transference);
  double worst = 0.0;
  for (double rho : {0.25, 0.5, 1.0, 1.5, 2.0, 2.5}) {
    const double c = level_cov(K, nu, rho);
    worst = std::max(worst, c);
    out.details.push_back(fmt("rho=%.2f coefficient of variation %.2e", rho, c));
  }
  out.pass = worst <= 1e-3;
  out.summary = fmt("F = exp(-0.5 lambda) - 0.5 exp(-1.5 lambda), worst CoV %.2e (<= 1e-3)", worst);
  return out;
}

Outcome plancherel() {
  Outcome out;
  out.pass = true;
  double band = 0.0;
  double slope = 0.0;
  for (double nu : {2.0, 3.0}) {
    const PlancherelEstimate e = estimate_plancherel(make_order(nu));
    double lo = INFINITY;
    double hi = 0.0;
    for (std::size_t i = 0; i < e.lambda.size(); ++i)
      if (e.lambda[i] >= 1e-2 && e.lambda[i] <= 1e2) {
        lo = std::min(lo, e.ratio[i]);
        hi = std::max(hi, e.ratio[i]);
      }
    const double ds = std::abs(e.slope_small - 0.5);
    const double dl = std::abs(e.slope_large - 0.5 * (nu - 1.0));
    band = std::max(band, hi / lo);
    slope = std::max({slope, ds, dl});
    out.details.push_back(fmt("nu=%.0f ratio in [%.4g, %.4g]", nu, lo, hi) +
                          fmt(", slopes %.4f (0.5) and %.4f (%.1f)", e.slope_small, e.slope_large, 0.5 * (nu - 1.0)));
  }
  out.pass = band <= 20.0 && slope <= 0.15;
  out.summary = fmt("C/c %.3f (<= 20), slope deviation %.3f (<= 0.15)", band, slope);
  return out;
}

Outcome propagation() {
  Outcome out;
  const Order o = make_order(2.0);
  std::vector<PropagationResult> runs;
  for (double h : {0.1, 0.05, 0.025}) {
    PropagationOptions opt;
    opt.h = h;
    const auto t0 = std::chrono::steady_clock::now();
    runs.push_back(propagation_study(o, opt));
    out.details.push_back(fmt("h=%.3f violation at T=2: %.4f, energy drift %.1e", h, runs.back().violation.back(),
                              runs.back().energy_drift) +
                          fmt(", %.1f s", seconds_since(t0)));
  }
  bool ok = runs[0].violation.back() <= 3.0 * runs[0].h;
  for (std::size_t k = 1; k < runs.size(); ++k)
    ok = ok && runs[k].violation.back() <= 0.5 * runs[k - 1].violation.back() + 1e-12;
  out.pass = ok;
  out.summary = fmt("violation %.4f at h=0.1 (<= %.2f), then %.4f", runs[0].violation.back(), 3.0 * runs[0].h,
                    runs[1].violation.back()) +
                fmt(" and %.4f (each at most half the previous)", runs[2].violation.back());
  return out;
}

Outcome radial_integration() {
  Outcome out;
  double worst = 0.0;
  for (double nu : {1.0, 2.0, 3.0}) {
    const Order o = make_order(nu);
    const PlaneGrid pl = build_plane(build_grid(nu, 2e4, 720, GridLayout::geometric, {10, 1e-3, 2.0}), 8.0, 321);
    const std::vector<std::function<double(double)>> prof{
        [](double r) { return std::exp(-r * r); },
        [](double r) { return std::exp(-4.0 * r * r); },
        [](double r) { return r * r * std::exp(-r * r); }};
    for (const auto& f : prof) {
      const double one = radial_integrate(o, f, 12.0, {1.0, 2.0, 4.0});
      worst = std::max(worst, std::abs(radial_integrate_plane(o, f, pl, false) - one) / one);
      worst = std::max(worst, std::abs(radial_integrate_plane(o, f, pl, true) - one) / one);
    }
  }
  double ball = 0.0;
  const Order o1 = make_order(1.0);
  for (double r : {0.5, 1.0, 2.0})
    ball = std::max(ball, std::abs(radial_integrate(o1, [](double) { return 1.0; }, r) -
                                   M_PI * (std::cosh(r) - 1.0)));
  out.pass = worst <= 1e-3 && ball <= 1e-6;
  out.summary = fmt("plane vs line %.2e (<= 1e-3), ball volume error %.2e (<= 1e-6)", worst, ball);
  out.details.push_back("profiles exp(-r^2), exp(-4r^2), r^2 exp(-r^2) for nu in {1, 2, 3}, both Haar measures");
  return out;
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form Hankel kernels", closed_form_kernels},
      {"Hankel inversion and Parseval", inversion_parseval},
      {"X_nu heat kernel", bessel_heat},
      {"G_nu heat kernel mass", group_heat_mass},
      {"two-path heat identity", two_path},
      {"semigroup under the G_nu convolution", semigroup},
      {"radiality of m^{1/2} K", radiality},
      {"Plancherel density", plancherel},
      {"finite propagation speed", propagation},
      {"radial integration", radial_integration},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.summary.c_str());
    for (const std::string& d : o.details) std::printf("    %s\n", d.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
