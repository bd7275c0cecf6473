#include "kingman/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "kingman/bessel_hypergroup.hpp"
#include "kingman/errors.hpp"
#include "kingman/parallel.hpp"

namespace kingman {

namespace {

constexpr double kPi = std::numbers::pi;

// Three-point stencil data shared by the half-line and mirrored solvers.
struct Stencil {
  std::size_t nx = 0;
  std::size_t nu = 0;
  std::vector<double> flux;  // x-edge coefficients between node i and i+1
  std::vector<double> vol;   // cell measures
  std::vector<double> e2u;
  double hu = 0.0;
};

Stencil stencil_of(const PlaneGrid& pl, double nu) {
  const HalfLineGrid& xg = pl.x_grid;
  Stencil st;
  st.nx = xg.size();
  st.nu = pl.nu_nodes();
  st.vol = xg.weights;
  st.flux.resize(st.nx > 0 ? st.nx - 1 : 0);
  for (std::size_t i = 0; i + 1 < st.nx; ++i)
    st.flux[i] = std::pow(xg.breaks[i + 1], nu - 1.0) / (xg.nodes[i + 1] - xg.nodes[i]);
  for (double u : pl.u_nodes) st.e2u.push_back(std::exp(2.0 * u));
  st.hu = pl.u_step;
  return st;
}

// out = −Δ_ν w with reflecting ends in u and zero flux at the outer x-edges.
void apply(const Stencil& st, const std::vector<double>& w, std::vector<double>& out) {
  const std::size_t nx = st.nx;
  const double ihu2 = 1.0 / (st.hu * st.hu);
  out.assign(w.size(), 0.0);
  for (std::size_t j = 0; j < st.nu; ++j) {
    const double* r = &w[j * nx];
    double* o = &out[j * nx];
    const double* lo = j > 0 ? &w[(j - 1) * nx] : &w[(j + 1) * nx];
    const double* hi = j + 1 < st.nu ? &w[(j + 1) * nx] : &w[(j - 1) * nx];
    const double c = st.e2u[j];
    for (std::size_t i = 0; i < nx; ++i) {
      const double right = i + 1 < nx ? st.flux[i] * (r[i + 1] - r[i]) : 0.0;
      const double left = i > 0 ? st.flux[i - 1] * (r[i] - r[i - 1]) : 0.0;
      o[i] = (lo[i] - 2.0 * r[i] + hi[i]) * ihu2 + c * (right - left) / st.vol[i];
    }
  }
}

double inner(const PlaneGrid& pl, const Stencil& st, const std::vector<double>& a,
             const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < st.nu; ++j) {
    double r = 0.0;
    for (std::size_t i = 0; i < st.nx; ++i) r += st.vol[i] * a[j * st.nx + i] * b[j * st.nx + i];
    s += pl.u_weights[j] * r;
  }
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// exp(−ρ²/σ²) cut at ρ = r0, with σ chosen so the cut sits at relative height `cut`.
double bump(double rho, double r0, double cut) {
  if (rho >= r0) return 0.0;
  const double q = rho / r0;
  return std::exp(std::log(cut) * q * q);
}

void leapfrog(const Stencil& st, std::vector<double>& now, std::vector<double>& prev, double dt,
              std::vector<double>& scratch) {
  apply(st, now, scratch);
  const double dt2 = dt * dt;
  for (std::size_t k = 0; k < now.size(); ++k) {
    const double next = 2.0 * now[k] - prev[k] + dt2 * scratch[k];
    prev[k] = now[k];
    now[k] = next;
  }
}

std::string label(const std::string& check, double nu) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s[nu=%g]", check.c_str(), nu);
  return buf;
}

std::string label(const std::string& check, double nu, double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s[nu=%g,t=%g]", check.c_str(), nu, t);
  return buf;
}

CheckReport make_report(std::string name, double measured, double tol, std::string prov) {
  CheckReport r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tol;
  r.pass = std::isfinite(measured) && measured <= tol;
  r.provenance = std::move(prov);
  return r;
}

}  // namespace

PlaneGrid wave_plane(double nu, double h, double x_max, double u_max) {
  if (!(h > 0.0) || !(x_max > 2.0 * h) || !(u_max > 2.0 * h))
    throw DomainError("wave grid needs h > 0 and a domain of several cells");
  if (nu < 1.0) throw DomainError("nu must be >= 1");
  const auto n = static_cast<std::size_t>(std::llround(x_max / h));
  HalfLineGrid xg;
  xg.nu = nu;
  xg.panel_order = 1;
  xg.layout = GridLayout::uniform;
  xg.bary_first = {1.0};
  xg.bary_rest = {1.0};
  xg.breaks.push_back(0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const double lo = i == 0 ? 0.0 : (static_cast<double>(i) - 0.5) * h;
    const double hi = (static_cast<double>(i) + 0.5) * h;
    xg.nodes.push_back(static_cast<double>(i) * h);
    xg.weights.push_back((std::pow(hi, nu) - std::pow(lo, nu)) / nu);
    xg.breaks.push_back(hi);
  }
  xg.x_max = xg.breaks.back();
  const long m = std::lround(u_max / h);
  return build_plane(std::move(xg), static_cast<double>(m) * h, static_cast<int>(2 * m + 1));
}

WaveState wave_init(const Order& order, const PlaneGrid& plane,
                    const std::function<double(double, double)>& w0, double cfl_margin) {
  if (!(cfl_margin > 0.0) || cfl_margin > 1.0) throw DomainError("cfl margin must lie in (0, 1]");
  WaveState s;
  s.plane = plane;
  s.nu = order.nu;
  s.cfl_margin = cfl_margin;
  s.dt = cfl_margin * plane.u_step / std::exp(plane.u_max);
  s.w_now.resize(plane.size());
  for (std::size_t j = 0; j < plane.nu_nodes(); ++j)
    for (std::size_t i = 0; i < plane.nx(); ++i)
      s.w_now[plane.index(j, i)] = w0(plane.x_grid.nodes[i], plane.u_nodes[j]);
  s.initial_max = max_abs(s.w_now);
  // Zero velocity: w^{−1} = w⁰ + (dt²/2)·(−Δ_ν)w⁰, so the first leapfrog step is the Taylor step.
  std::vector<double> aw;
  apply(stencil_of(plane, s.nu), s.w_now, aw);
  s.w_prev = s.w_now;
  for (std::size_t k = 0; k < aw.size(); ++k) s.w_prev[k] += 0.5 * s.dt * s.dt * aw[k];
  return s;
}

std::vector<double> wave_operator(const WaveState& s, const std::vector<double>& w) {
  if (w.size() != s.plane.size()) throw DomainError("field size does not match wave plane");
  std::vector<double> out;
  apply(stencil_of(s.plane, s.nu), w, out);
  return out;
}

WaveState wave_step(const WaveState& s) {
  const double limit = s.cfl_margin * s.plane.u_step / std::exp(s.plane.u_max);
  if (s.dt > limit * (1.0 + 1e-12)) throw DomainError("time step violates the stability bound");
  WaveState next = s;
  std::vector<double> scratch;
  leapfrog(stencil_of(s.plane, s.nu), next.w_now, next.w_prev, s.dt, scratch);
  next.time += s.dt;
  if (max_abs(next.w_now) > 10.0 * s.initial_max && s.initial_max > 0.0)
    throw Instability("wave amplitude exceeded 10x its initial maximum");
  return next;
}

double wave_energy(const WaveState& s) {
  const Stencil st = stencil_of(s.plane, s.nu);
  std::vector<double> v(s.w_now.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (s.w_now[k] - s.w_prev[k]) / s.dt;
  std::vector<double> aw;
  apply(st, s.w_prev, aw);
  return 0.5 * inner(s.plane, st, v, v) - 0.5 * inner(s.plane, st, s.w_now, aw);
}

double PropagationResult::max_violation() const {
  double m = 0.0;
  for (double v : violation) m = std::max(m, v);
  return m;
}

PropagationResult propagation_study(const Order& order, const PropagationOptions& opt) {
  if (!(opt.T >= 0.0) || opt.n_times < 1) throw DomainError("invalid propagation schedule");
  const PlaneGrid pl = wave_plane(order.nu, opt.h, opt.x_max, opt.u_max);
  WaveState s = wave_init(
      order, pl, [&](double x, double u) { return bump(distance({x, u}, opt.center), opt.r0, opt.cut); },
      opt.cfl_margin);
  PropagationResult res;
  res.h = opt.h;

  std::vector<double> rho(pl.size());
  for (std::size_t j = 0; j < pl.nu_nodes(); ++j)
    for (std::size_t i = 0; i < pl.nx(); ++i)
      rho[pl.index(j, i)] = distance({pl.x_grid.nodes[i], pl.u_nodes[j]}, opt.center);
  const auto violation = [&](double thr, double t) {
    double v = 0.0;
    const double cut = thr * s.initial_max;
    for (std::size_t k = 0; k < rho.size(); ++k)
      if (std::abs(s.w_now[k]) > cut) v = std::max(v, rho[k] - opt.r0 - t);
    return v;
  };

  // Shrink dt so the report times land on steps.
  const long per = static_cast<long>(std::ceil(opt.T / (opt.n_times * s.dt)));
  const long steps = std::max(1L, per) * opt.n_times;
  if (opt.T > 0.0) {
    const double dt = opt.T / static_cast<double>(steps);
    if (dt < s.dt) {
      s = wave_init(order, pl, [&](double x, double u) { return bump(distance({x, u}, opt.center), opt.r0, opt.cut); },
                    opt.cfl_margin * dt / s.dt);
    }
  }
  const Stencil st = stencil_of(pl, order.nu);
  const double e0 = wave_energy(s);
  std::vector<double> scratch;
  res.times.push_back(0.0);
  res.violation.push_back(violation(opt.threshold, 0.0));
  const long stride = opt.T > 0.0 ? steps / opt.n_times : 0;
  for (long n = 1; opt.T > 0.0 && n <= steps; ++n) {
    leapfrog(st, s.w_now, s.w_prev, s.dt, scratch);
    s.time = s.dt * static_cast<double>(n);
    if (n % stride == 0) {
      if (max_abs(s.w_now) > 10.0 * s.initial_max)
        throw Instability("wave amplitude exceeded 10x its initial maximum");
      res.times.push_back(s.time);
      res.violation.push_back(violation(opt.threshold, s.time));
      if (e0 > 0.0) res.energy_drift = std::max(res.energy_drift, std::abs(wave_energy(s) - e0) / e0);
    }
  }
  for (double thr : opt.sensitivity) res.sensitivity_violation.push_back(violation(thr, s.time));
  return res;
}

std::pair<double, double> reflection_check(const Order& order, const PropagationOptions& opt) {
  const double h = opt.h;
  const PlaneGrid half = wave_plane(order.nu, h, opt.x_max, opt.u_max);
  const std::size_t n = half.nx();  // nodes 0..n−1 on the half line
  const std::size_t nx = 2 * n - 1;  // mirrored line −(n−1)..(n−1)
  const std::size_t nu = half.nu_nodes();
  const double nuo = order.nu;

  Stencil full;
  full.nx = nx;
  full.nu = nu;
  full.hu = half.u_step;
  full.e2u.resize(nu);
  for (std::size_t j = 0; j < nu; ++j) full.e2u[j] = std::exp(2.0 * half.u_nodes[j]);
  full.vol.resize(nx);
  full.flux.resize(nx - 1);
  for (std::size_t k = 0; k < nx; ++k) {
    const std::size_t i = k >= n - 1 ? k - (n - 1) : (n - 1) - k;  // |index|
    full.vol[k] = i == 0 ? 2.0 * half.x_grid.weights[0] : half.x_grid.weights[i];
  }
  for (std::size_t k = 0; k + 1 < nx; ++k) {
    // Edge between k and k+1 sits at |x| = |k − (n−1) + ½|·h.
    const double e = std::abs(static_cast<double>(k) - static_cast<double>(n - 1) + 0.5) * h;
    full.flux[k] = std::pow(e, nuo - 1.0) / h;
  }

  const auto xk = [&](std::size_t k) { return (static_cast<double>(k) - static_cast<double>(n - 1)) * h; };
  std::vector<double> w(nx * nu);
  for (std::size_t j = 0; j < nu; ++j)
    for (std::size_t k = 0; k < nx; ++k)
      w[j * nx + k] = bump(distance({std::abs(xk(k)), half.u_nodes[j]}, {0.0, opt.center.u}), opt.r0, opt.cut);

  WaveState s = wave_init(order, half, [&](double x, double u) {
    return bump(distance({x, u}, {0.0, opt.center.u}), opt.r0, opt.cut);
  }, opt.cfl_margin);
  const double dt = s.dt;
  std::vector<double> prev = w;
  std::vector<double> aw;
  apply(full, w, aw);
  for (std::size_t q = 0; q < w.size(); ++q) prev[q] += 0.5 * dt * dt * aw[q];

  const Stencil st = stencil_of(half, nuo);
  const long steps = static_cast<long>(std::ceil(opt.T / dt));
  std::vector<double> scratch;
  for (long q = 0; q < steps; ++q) {
    leapfrog(full, w, prev, dt, scratch);
    leapfrog(st, s.w_now, s.w_prev, dt, scratch);
  }
  double odd = 0.0;
  double gap = 0.0;
  for (std::size_t j = 0; j < nu; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double plus = w[j * nx + (n - 1) + i];
      const double minus = w[j * nx + (n - 1) - i];
      odd = std::max(odd, std::abs(plus - minus));
      gap = std::max(gap, std::abs(plus - s.w_now[half.index(j, i)]));
    }
  return {odd / s.initial_max, gap / s.initial_max};
}

CheckReport propagation_report(const Order& order, const PropagationOptions& opt) {
  const PropagationResult r = propagation_study(order, opt);
  return make_report(label("wave_propagation", order.nu), r.max_violation(), 3.0 * opt.h,
                     "wave solutions stay within distance |t| of the initial support");
}

PlaneGrid heat_plane(double nu, double t) {
  static const double step = 0.05;
  const HalfLineGrid xg = build_grid(nu, 1e5, 840, GridLayout::geometric, {10, 1e-3, 2.0});
  const long m = static_cast<long>(std::ceil(6.25 * std::sqrt(t) / step));
  return build_plane(xg, static_cast<double>(m) * step, static_cast<int>(2 * m + 1));
}

PlaneGrid interior_plane(double nu) {
  return build_plane(build_grid(nu, 30.0, 300, GridLayout::composite, {12, 0.0, 2.0}), 4.0, 81);
}

namespace {

double rel_l2(const RadialProfile& a, const RadialProfile& b) {
  double n = 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double e = a.values[i] - b.values[i];
    n += a.grid.weights[i] * e * e;
    d += a.grid.weights[i] * b.values[i] * b.values[i];
  }
  return std::sqrt(n / d);
}

using Task = std::function<std::vector<CheckReport>()>;

// Runs one check; an exception becomes a failed report under that check's name.
void attempt(std::vector<CheckReport>& out, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    out.push_back(make_report(name, std::numeric_limits<double>::quiet_NaN(), 0.0,
                              std::string("error: ") + e.what()));
  }
}

std::vector<CheckReport> nu_checks(double nu, const SuiteConfig& cfg) {
  std::vector<CheckReport> out;
  const Order honest = make_order(nu);
  Order o = honest;
  o.kappa *= cfg.kappa_fault;

  attempt(out, label("hankel_inversion", nu), [&] {
    const HalfLineGrid g = build_grid(nu, 14.0, 320, GridLayout::composite, {16, 0.0, 2.0});
    const RadialProfile f = sample_profile(g, [](double y) { return std::exp(-y * y); });
    const RadialProfile H = hankel_transform(o, f, g);
    const RadialProfile back = hankel_inverse(o, H, g);
    out.push_back(make_report(label("hankel_inversion", nu), rel_l2(back, f), cfg.hankel_tol,
                              "the Hankel transform is inverted by itself up to kappa^2"));
    out.push_back(make_report(label("hankel_parseval", nu),
                              std::abs(H.l2() - o.kappa * f.l2()) / (o.kappa * f.l2()),
                              cfg.hankel_tol, "Plancherel identity for the Hankel transform"));
  });
  attempt(out, label("convolution_theorem", nu), [&] {
    const HalfLineGrid g = build_grid(nu, 12.0, 200, GridLayout::composite, {10, 0.0, 2.0});
    const RadialProfile f = sample_profile(g, [](double y) { return std::exp(-y * y); });
    const RadialProfile h = sample_profile(g, [](double y) { return std::exp(-2.0 * y * y); });
    const RadialProfile fh = hankel_convolve(honest, f, h);
    const RadialProfile a = hankel_transform(o, fh, g);
    const RadialProfile bf = hankel_transform(o, f, g);
    const RadialProfile bh = hankel_transform(o, h, g);
    double e = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      e = std::max(e, std::abs(a.values[i] - bf.values[i] * bh.values[i]));
      m = std::max(m, std::abs(bf.values[i] * bh.values[i]));
    }
    out.push_back(make_report(label("convolution_theorem", nu), e / m, cfg.hankel_tol,
                              "the Hankel transform turns convolution into a product"));
  });
  attempt(out, label("radial_integration", nu), [&] {
    const PlaneGrid pl = build_plane(build_grid(nu, 2e4, 720, GridLayout::geometric, {10, 1e-3, 2.0}),
                                     8.0, 321);
    const std::vector<std::function<double(double)>> prof{
        [](double r) { return std::exp(-r * r); },
        [](double r) { return std::exp(-4.0 * r * r); },
        [](double r) { return r * r * std::exp(-r * r); }};
    double worst = 0.0;
    for (const auto& f : prof) {
      const double one = radial_integrate(honest, f, 12.0, {1.0, 2.0, 4.0});
      worst = std::max(worst, std::abs(radial_integrate_plane(honest, f, pl, false) - one) / one);
      worst = std::max(worst, std::abs(radial_integrate_plane(honest, f, pl, true) - one) / one);
    }
    out.push_back(make_report(label("radial_integration", nu), worst, cfg.radial_tol,
                              "integrals of radial functions reduce to c_nu int f(r) sinh^nu r dr "
                              "for both Haar measures"));
    const BallBound bb = weighted_ball_bound(honest, [](double r) { return std::exp(-r * r); }, pl);
    out.push_back(make_report(label("weighted_ball", nu), bb.ratio, 100.0,
                              "int f(|p|) e^{-nu u} x^nu is controlled by int f(|p|)|p|"));
  });
  if (nu == 1.0) attempt(out, label("ball_volume", nu), [&] {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
      const double v = radial_integrate(honest, [r](double s) { return s <= r ? 1.0 : 0.0; }, r);
      worst = std::max(worst, std::abs(v - kPi * (std::cosh(r) - 1.0)));
    }
    out.push_back(make_report(label("ball_volume", nu), worst, 1e-6,
                              "nu = 1 ball volume pi(cosh r - 1)"));
  });
  attempt(out, label("translation_bounds", nu), [&] {
    const PlaneGrid pl = build_plane(build_grid(nu, 8.0, 200, GridLayout::composite, {10, 0.0, 2.0}),
                                     6.0, 121);
    const KernelField f = sample_field(pl, nu, [](double x, double u) { return std::exp(-x * x - u * u); });
    const GPoint p{0.5, 0.3};
    const KernelField r = right_translate(honest, p, f);
    const KernelField l = left_translate(honest, p, f);
    double worst = -std::numeric_limits<double>::infinity();
    for (double q : {1.0, 2.0}) {
      worst = std::max(worst, r.lp_norm(q) / f.lp_norm(q) - 1.0);
      worst = std::max(worst, l.lp_norm(q) / (std::pow(modular(honest, p), 1.0 / q) * f.lp_norm(q)) - 1.0);
    }
    out.push_back(make_report(label("translation_bounds", nu), std::max(worst, 0.0), cfg.translation_tol,
                              "right translations contract L^p, left ones by m^{1/p}"));
  });
  if (cfg.plancherel) attempt(out, label("plancherel_ratio", nu), [&] {
    const PlancherelEstimate e = estimate_plancherel(honest);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < e.lambda.size(); ++i)
      if (e.lambda[i] >= 1e-2 && e.lambda[i] <= 1e2) {
        lo = std::min(lo, e.ratio[i]);
        hi = std::max(hi, e.ratio[i]);
      }
    out.push_back(make_report(label("plancherel_ratio", nu), hi / lo, cfg.plancherel_band,
                              "Plancherel density is comparable to lambda^{[1/2,(nu-1)/2]}"));
    if (nu == std::round(nu)) {
      const double d = std::max(std::abs(e.slope_small - 0.5), std::abs(e.slope_large - 0.5 * (nu - 1.0)));
      out.push_back(make_report(label("plancherel_slope", nu), d, 0.15,
                                "integer nu: Plancherel exponents of the Euclidean case"));
    }
  });
  if (cfg.wave) attempt(out, label("wave_propagation", nu), [&] {
    out.push_back(propagation_report(honest));
    const auto [odd, gap] = reflection_check(honest);
    out.push_back(make_report(label("wave_reflection", nu), std::max(odd, gap), 1e-10,
                              "even data stay even; the half-line solver is the Neumann realization"));
  });
  return out;
}

double level_set_cov(const KernelField& K, double nu, const std::vector<double>& rhos) {
  double worst = 0.0;
  double peak = 0.0;
  for (double v : K.values) peak = std::max(peak, std::abs(v));
  for (double rho : rhos) {
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
    if (std::abs(mean) < 1e-6 * peak) continue;
    const double var = std::max(0.0, s2 / (n - 1) - mean * mean);
    worst = std::max(worst, std::sqrt(var) / std::abs(mean));
  }
  return worst;
}

std::vector<CheckReport> cell_checks(double nu, double t, const SuiteConfig& cfg) {
  std::vector<CheckReport> out;
  const Order o = make_order(nu);
  attempt(out, label("heat_mass_X", nu, t), [&] {
    const HalfLineGrid g = build_grid(nu, 12.0 * std::sqrt(t) + 4.0, 400, GridLayout::composite,
                                      {12, 0.0, 2.0});
    const RadialProfile k = bessel_heat_kernel(o, t, g);
    out.push_back(make_report(label("heat_mass_X", nu, t), std::abs(k.integral() - 1.0), 1e-8,
                              "the X_nu heat kernel is a probability density"));
  });
  const HeatMethod method = t >= kPsiTMin ? HeatMethod::psi : HeatMethod::contour;
  attempt(out, label("heat_mass_G", nu, t), [&] {
    const HeatKernelResult k = g_heat_kernel(o, t, heat_plane(nu, t), method);
    out.push_back(make_report(label("heat_mass_G", nu, t), std::abs(k.field.integral() - 1.0),
                              cfg.mass_tol, "the G_nu heat kernel has mass one"));
    out.push_back(make_report(label("heat_positive", nu, t), std::max(0.0, -k.min_value), 1e-8,
                              "the G_nu heat kernel is nonnegative"));
  });
  attempt(out, label("two_path", nu, t), [&] {
    const PlaneGrid pl = interior_plane(nu);
    const PsiWeight psi = build_psi_weight(t);
    const KernelField a = heat_kernel_via_multiplier(o, psi, pl);
    const HeatKernelResult b = g_heat_kernel(o, t, pl, HeatMethod::psi);
    double d = 0.0;
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      d = std::max(d, std::abs(a.values[i] - b.field.values[i]));
      m = std::max(m, std::abs(b.field.values[i]));
    }
    out.push_back(make_report(label("two_path", nu, t), d / m, cfg.two_path_tol,
                              "heat kernel at height u equals the L_nu-kernel of M_{t,u}"));
  });
  attempt(out, label("semigroup", nu, t), [&] {
    const PlaneGrid pl = heat_plane(nu, t);
    const KernelField h = g_heat_kernel(o, 0.5 * t, pl, HeatMethod::contour).field;
    const KernelField full = g_heat_kernel(o, t, pl, HeatMethod::contour).field;
    const KernelField c = g_convolve(o, h, h);
    std::vector<double> d(c.values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::abs(c.values[i] - full.values[i]);
    out.push_back(make_report(label("semigroup", nu, t), pl.integrate(d), cfg.semigroup_tol,
                              "K_{t/2} conv K_{t/2} = K_t under the G_nu convolution"));
  });
  attempt(out, label("radiality", nu, t), [&] {
    ExpMixMultiplier F;
    F.terms = {{1.0, t}, {-0.5, 3.0 * t}};
    const KernelField K = multiplier_kernel(o, F, interior_plane(nu), MultiplierPath::transference);
    out.push_back(make_report(label("radiality", nu, t),
                              level_set_cov(K, nu, {0.25, 0.5, 1.0, 1.5, 2.0}), cfg.radiality_tol,
                              "m^{1/2} K_{F(Delta_nu)} is constant on distance spheres"));
  });
  return out;
}

std::vector<CheckReport> guarded(const std::string& name, const Task& task) {
  try {
    return task();
  } catch (const std::exception& e) {
    CheckReport r;
    r.name = name;
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.tolerance = 1.0;
    r.pass = false;
    r.provenance = std::string("error: ") + e.what();
    return {r};
  }
}

}  // namespace

std::vector<CheckReport> run_suite(const std::vector<double>& nus, const std::vector<double>& ts,
                                   const SuiteConfig& cfg) {
  std::vector<std::pair<std::string, Task>> tasks;
  for (double nu : nus) {
    tasks.emplace_back(label("nu_checks", nu), [nu, cfg] { return nu_checks(nu, cfg); });
    for (double t : ts)
      tasks.emplace_back(label("cell_checks", nu, t), [nu, t, cfg] { return cell_checks(nu, t, cfg); });
  }
  std::vector<std::vector<CheckReport>> parts(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) { parts[i] = guarded(tasks[i].first, tasks[i].second); });
  std::vector<CheckReport> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return all;
}

void write_reports(std::ostream& os, const std::vector<CheckReport>& reports) {
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const CheckReport& r : reports) {
    os << "[check]\n";
    os << "name = " << r.name << "\n";
    os << "provenance = " << r.provenance << "\n";
    os << "measured = " << num(r.measured) << "\n";
    os << "tolerance = " << num(r.tolerance) << "\n";
    os << "pass = " << (r.pass ? "true" : "false") << "\n\n";
  }
  os << "# name,measured,tolerance,pass\n";
  for (const CheckReport& r : reports)
    os << r.name << "," << num(r.measured) << "," << num(r.tolerance) << ","
       << (r.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace kingman
