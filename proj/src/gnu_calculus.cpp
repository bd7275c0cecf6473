#include "kingman/gnu_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <Eigen/Dense>
#include <limits>
#include <numbers>

#include "kingman/errors.hpp"
#include "kingman/parallel.hpp"

namespace kingman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExpFloor = 700.0;  // exp(−700) is the smallest factor we keep

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat time must be positive");
}

}  // namespace

PsiValue psi_eval(double t, double xi, const PsiOptions& opt) {
  check_time(t);
  if (!(xi > 0.0)) throw DomainError("psi needs xi > 0");
  if (t < kPsiTMin)
    throw NonConvergent("psi quadrature is unreliable below t_min = 0.05 (t = " + sci(t) + ")");
  const double inv_xi = 1.0 / xi;
  const double inv_4t = 0.25 / t;
  const auto amp = [&](double th) {
    const double e = th * th * inv_4t + std::cosh(th) * inv_xi;
    return e > 745.0 ? 0.0 : std::sinh(th) * std::exp(-e);
  };
  QuadratureSpec spec;
  spec.rel_tol = opt.rel_tol;
  spec.abs_tol = 1e-300;
  const QuadResult q = integrate_oscillatory(amp, kPi / (2.0 * t), 0.0,
                                             std::numeric_limits<double>::infinity(), spec);
  const double pref = std::exp(kPi * kPi * inv_4t) / (xi * xi * std::sqrt(4.0 * kPi * kPi * kPi * t));
  PsiValue r;
  r.value = pref * q.value;
  r.error = pref * (q.error + 4.0 * std::numeric_limits<double>::epsilon() * q.l1);
  if (xi * xi * r.error > opt.max_weighted_error)
    throw NonConvergent("psi cancellation error " + sci(xi * xi * r.error) +
                        " exceeds tolerance at t = " + sci(t));
  return r;
}

double PsiWeight::integrate(const std::function<double(double)>& g) const {
  double s = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) s += weights[k] * values[k] * g(xi[k]);
  return s;
}

PsiWeight build_psi_weight(double t, const PsiWeightOptions& opt) {
  check_time(t);
  if (!(opt.log_step > 0.0) || !(opt.xi_lo > 0.0)) throw DomainError("invalid psi grid options");
  PsiWeight w;
  w.t = t;
  const double h = opt.log_step;
  int quiet = 0;
  for (int k = 0;; ++k) {
    const double xi = opt.xi_lo * std::exp(h * k);
    if (xi > opt.xi_hi_max)
      throw NonConvergent("psi tail did not decay by xi = " + sci(opt.xi_hi_max));
    const PsiValue v = psi_eval(t, xi, opt.psi);
    w.xi.push_back(xi);
    w.values.push_back(v.value);
    w.errors.push_back(v.error);
    const double scaled = xi * xi * std::abs(v.value);
    w.bound = std::max(w.bound, scaled);
    // Integrands against Ψ carry at least ξ^{−ν/2} ≤ ξ^{−1/2} beyond ξ², so the
    // tail past ξ is bounded by ξ^{3/2}|Ψ| up to a constant.
    quiet = (xi > 10.0 && scaled / std::sqrt(xi) < opt.tail_tol * w.bound) ? quiet + 1 : 0;
    if (quiet >= 3) break;
  }
  w.weights.resize(w.xi.size());
  for (std::size_t k = 0; k < w.xi.size(); ++k) w.weights[k] = h * w.xi[k];
  w.weights.front() *= 0.5;
  w.weights.back() *= 0.5;
  return w;
}

double m_function(const PsiWeight& psi, double u, double lambda) {
  const double ch = std::cosh(u);
  const double half_eu = 0.5 * std::exp(u) * lambda;
  double s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double xi = psi.xi[k];
    const double e = ch / xi + xi * half_eu;
    if (e > kExpFloor) continue;
    s += psi.weights[k] * psi.values[k] * std::exp(-e);
  }
  return s;
}

double m_function(double t, double u, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  return m_function(build_psi_weight(t), u, lambda);
}

double g_heat_value(const Order& order, const PsiWeight& psi, double x, double u) {
  const double c = 1.0 + gnorm_cosh_m1(x, u);
  const double half_nu = 0.5 * order.nu;
  const double log2eu = std::log(2.0) + u;
  double s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double xi = psi.xi[k];
    const double e = c / xi + half_nu * (log2eu + std::log(xi));
    if (c / xi > kExpFloor) continue;
    s += psi.weights[k] * psi.values[k] * std::exp(-e);
  }
  return 2.0 / std::tgamma(half_nu) * s;
}

namespace {

// Trapezoid rule on θ = s + i(π − δ) for
//   J_t(c) = ½ Im ∫ sinh θ (cosh θ + c)^{−1−ν/2} e^{−(θ−iπ)²/4t} dθ.
struct ContourRule {
  double t = 0.0;
  std::vector<std::complex<double>> cosh_theta;
  std::vector<std::complex<double>> factor;  // h · sinh θ · gaussian

  explicit ContourRule(double t_) : t(t_) {
    const double delta = std::min(kPi, 2.0 * std::sqrt(t));
    const double h = delta / 8.0;
    const double half_width = std::sqrt(delta * delta + 180.0 * t);
    const int n = static_cast<int>(std::ceil(half_width / h));
    const std::complex<double> shift(0.0, kPi - delta);
    for (int k = -n; k <= n; ++k) {
      const std::complex<double> th = h * k + shift;
      const std::complex<double> d = th - std::complex<double>(0.0, kPi);
      cosh_theta.push_back(std::cosh(th));
      factor.push_back(h * std::sinh(th) * std::exp(-d * d / (4.0 * t)));
    }
  }

  double J(double c, double beta) const {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < factor.size(); ++k)
      acc += factor[k] * std::exp(-beta * std::log(cosh_theta[k] + c));
    return 0.5 * acc.imag();
  }
};

double radial_prefactor(const Order& order, double t) {
  return order.nu * std::pow(2.0, -0.5 * order.nu) / std::sqrt(4.0 * kPi * kPi * kPi * t);
}

}  // namespace

double g_heat_value_contour(const Order& order, double t, double x, double u) {
  check_time(t);
  const ContourRule rule(t);
  const double c = 1.0 + gnorm_cosh_m1(x, u);
  return std::exp(-0.5 * order.nu * u) * radial_prefactor(order, t) * rule.J(c, 1.0 + 0.5 * order.nu);
}

double g_heat_radial(const Order& order, double t, double r) {
  check_time(t);
  const ContourRule rule(t);
  return radial_prefactor(order, t) * rule.J(std::cosh(r), 1.0 + 0.5 * order.nu);
}

HeatKernelResult g_heat_kernel(const Order& order, double t, const PlaneGrid& plane,
                               HeatMethod method) {
  check_time(t);
  HeatKernelResult res;
  res.field = KernelField{plane, std::vector<double>(plane.size(), 0.0), order.nu};
  const HalfLineGrid& xg = plane.x_grid;
  if (method == HeatMethod::psi) {
    const PsiWeight psi = build_psi_weight(t);
    parallel_for(plane.nu_nodes(), [&](std::size_t iu) {
      for (std::size_t ix = 0; ix < plane.nx(); ++ix)
        res.field.at(iu, ix) = g_heat_value(order, psi, xg.nodes[ix], plane.u_nodes[iu]);
    });
  } else {
    const ContourRule rule(t);
    const double pref = radial_prefactor(order, t);
    const double beta = 1.0 + 0.5 * order.nu;
    parallel_for(plane.nu_nodes(), [&](std::size_t iu) {
      const double u = plane.u_nodes[iu];
      const double twist = std::exp(-0.5 * order.nu * u) * pref;
      for (std::size_t ix = 0; ix < plane.nx(); ++ix)
        res.field.at(iu, ix) = twist * rule.J(1.0 + gnorm_cosh_m1(xg.nodes[ix], u), beta);
    });
  }
  res.min_value = *std::min_element(res.field.values.begin(), res.field.values.end());
  for (double v : res.field.values)
    if (v < -res.neg_tol) ++res.n_negative;
  return res;
}

namespace {

// Row-wise Hankel inversion of a u-dependent symbol y ↦ S_u(y²). Each row
// uses y = η/a_u with a_u = √(2e^u cosh u), so the symbol decays like e^{−η}.
KernelField transference_rows(const Order& order, const PlaneGrid& plane,
                              const std::function<double(double u, double lambda)>& symbol) {
  const HalfLineGrid& xg = plane.x_grid;
  constexpr double eta_max = 32.0;
  constexpr int p = 16;
  const double d_eta = std::min(0.25, 8.0 / xg.x_max);
  const int panels = static_cast<int>(std::ceil(eta_max / d_eta));
  std::vector<double> breaks(panels + 1);
  for (int k = 0; k <= panels; ++k) breaks[k] = eta_max * k / panels;
  const HalfLineGrid eta_grid = grid_from_breaks(order.nu, breaks, p, GridLayout::uniform);

  KernelField out{plane, std::vector<double>(plane.size(), 0.0), order.nu};
  const double k2 = 1.0 / (order.kappa * order.kappa);
  parallel_for(plane.nu_nodes(), [&](std::size_t iu) {
    const double u = plane.u_nodes[iu];
    const double a = std::sqrt(2.0 * std::exp(u) * std::cosh(u));
    const double scale = std::pow(a, -order.nu);  // dμ(y) = a^{−ν} dμ(η)
    std::vector<double> ys(eta_grid.size());
    std::vector<double> ws(eta_grid.size());
    for (std::size_t j = 0; j < eta_grid.size(); ++j) {
      ys[j] = eta_grid.nodes[j] / a;
      ws[j] = scale * eta_grid.weights[j] * symbol(u, ys[j] * ys[j]);
    }
    for (std::size_t ix = 0; ix < plane.nx(); ++ix) {
      const double x = xg.nodes[ix];
      double acc = 0.0;
      for (std::size_t j = 0; j < ys.size(); ++j) acc += ws[j] * j_kernel(order, x * ys[j]);
      out.at(iu, ix) = k2 * acc;
    }
  });
  return out;
}

}  // namespace

KernelField heat_kernel_via_multiplier(const Order& order, const PsiWeight& psi,
                                       const PlaneGrid& plane) {
  return transference_rows(order, plane,
                           [&](double u, double lam) { return m_function(psi, u, lam); });
}

double ExpMixMultiplier::operator()(double lambda) const {
  double s = 0.0;
  for (const auto& [c, t] : terms) s += c * std::exp(-t * lambda);
  return s;
}

void ExpMixMultiplier::validate() const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].second > 0.0)) throw DomainError("exponential rates must be positive");
    if (!std::isfinite(terms[i].first)) throw DomainError("mixture coefficient is not finite");
    for (std::size_t j = 0; j < i; ++j)
      if (terms[j].second == terms[i].second) throw DomainError("exponential rates must be distinct");
  }
}

KernelField multiplier_kernel(const Order& order, const ExpMixMultiplier& F,
                              const PlaneGrid& plane, MultiplierPath path, HeatMethod method) {
  F.validate();
  KernelField out{plane, std::vector<double>(plane.size(), 0.0), order.nu};
  if (F.terms.empty()) return out;
  if (path == MultiplierPath::linearity) {
    for (const auto& [c, t] : F.terms) {
      const HeatKernelResult k = g_heat_kernel(order, t, plane, method);
      for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += c * k.field.values[i];
    }
    return out;
  }
  std::vector<PsiWeight> psis;
  for (const auto& term : F.terms) psis.push_back(build_psi_weight(term.second));
  return transference_rows(order, plane, [&](double u, double lam) {
    double s = 0.0;
    for (std::size_t j = 0; j < psis.size(); ++j) s += F.terms[j].first * m_function(psis[j], u, lam);
    return s;
  });
}

double bipower(double lambda, double a, double b) {
  return lambda <= 1.0 ? std::pow(lambda, a) : std::pow(lambda, b);
}

ExpMixMultiplier project_to_expmix(const std::vector<double>& lambda,
                                   const std::vector<double>& values, int n_terms,
                                   double t_lo, double t_hi, const ProjectionOptions& opt) {
  const std::size_t m = lambda.size();
  if (m != values.size() || m < 2) throw DomainError("projection needs matching samples");
  if (n_terms < 1) throw DomainError("projection needs at least one term");
  if (!(t_lo > 0.0) || !(t_hi >= t_lo)) throw DomainError("invalid rate range");
  for (std::size_t k = 1; k < m; ++k)
    if (!(lambda[k] > lambda[k - 1])) throw DomainError("lambda samples must increase");
  if (!(lambda.front() >= 0.0)) throw DomainError("lambda samples must be >= 0");

  std::vector<double> rates(n_terms);
  for (int j = 0; j < n_terms; ++j)
    rates[j] = n_terms == 1 ? std::sqrt(t_lo * t_hi)
                            : t_lo * std::pow(t_hi / t_lo, static_cast<double>(j) / (n_terms - 1));

  // Trapezoid weights in λ times λ^{[3/2,(ν+1)/2]}.
  Eigen::VectorXd sw(static_cast<long>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double left = k > 0 ? lambda[k] - lambda[k - 1] : 0.0;
    const double right = k + 1 < m ? lambda[k + 1] - lambda[k] : 0.0;
    sw(static_cast<long>(k)) =
        std::sqrt(0.5 * (left + right) * bipower(lambda[k], 1.5, 0.5 * (opt.nu + 1.0)));
  }
  Eigen::MatrixXd A(static_cast<long>(m), n_terms);
  Eigen::VectorXd b(static_cast<long>(m));
  for (std::size_t k = 0; k < m; ++k) {
    b(static_cast<long>(k)) = sw(static_cast<long>(k)) * values[k];
    for (int j = 0; j < n_terms; ++j)
      A(static_cast<long>(k), j) = sw(static_cast<long>(k)) * std::exp(-rates[j] * lambda[k]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s(0);
  const double rho = opt.ridge * smax * smax;
  const double smin = s(s.size() - 1);
  const double cond = (smax * smax + rho) / (smin * smin + rho);
  if (!(cond <= opt.max_condition))
    throw IllConditioned("exponential design matrix condition " + sci(cond) +
                         " exceeds " + sci(opt.max_condition));
  const Eigen::VectorXd ub = svd.matrixU().transpose() * b;
  Eigen::VectorXd filt(s.size());
  for (long i = 0; i < s.size(); ++i) filt(i) = s(i) / (s(i) * s(i) + rho) * ub(i);
  const Eigen::VectorXd coef = svd.matrixV() * filt;

  ExpMixMultiplier F;
  for (int j = 0; j < n_terms; ++j) F.terms.emplace_back(coef(j), rates[j]);
  F.residual_abs = (A * coef - b).norm();
  const double bn = b.norm();
  F.residual = bn > 0.0 ? F.residual_abs / bn : F.residual_abs;
  return F;
}

double expmix_kernel_l2sq(const Order& order, const ExpMixMultiplier& F) {
  F.validate();
  if (F.terms.empty()) return 0.0;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (const auto& term : F.terms) {
    t_min = std::min(t_min, term.second);
    t_max = std::max(t_max, term.second);
  }
  std::vector<ContourRule> rules;
  std::vector<double> prefs;
  for (const auto& term : F.terms) {
    rules.emplace_back(term.second);
    prefs.push_back(term.first * radial_prefactor(order, term.second));
  }
  const double beta = 1.0 + 0.5 * order.nu;
  const auto integrand = [&](double r) {
    const double c = std::cosh(r);
    double k = 0.0;
    for (std::size_t j = 0; j < rules.size(); ++j) k += prefs[j] * rules[j].J(c, beta);
    return k * k * std::pow(std::sinh(r), order.nu);
  };
  // Composite Gauss–Legendre with panels on the scale √t_min of the sharpest term.
  const double r_max = 10.0 * std::sqrt(t_max) + 2.0;
  const double width = std::min(1.0, 0.5 * std::sqrt(t_min));
  const int panels = static_cast<int>(std::ceil(r_max / width));
  const GaussRule gl = gauss_legendre(20);
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = k * width;
    const double half = 0.5 * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      acc += gl.weights[i] * integrand(a + half * (1.0 + gl.nodes[i]));
    total += half * acc;
  }
  return order.c * total;
}

PlancherelEstimate estimate_plancherel(const Order& order, const PlancherelOptions& opt) {
  if (opt.s_max_exp < opt.s_min_exp) return {};
  constexpr double gamma_e = 0.57721566490153286;
  const int n = opt.s_max_exp - opt.s_min_exp + 1;
  PlancherelEstimate est;
  est.lambda.resize(n);
  est.density.resize(n);
  est.reference.resize(n);
  est.ratio.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const double s = std::ldexp(1.0, opt.s_min_exp + static_cast<int>(i));
    ExpMixMultiplier F;
    F.terms = {{1.0, s}, {-1.0, 2.0 * s}};
    const double f2 = 1.0 / (12.0 * s);
    // ∫ e^{−aλ} log λ dλ = −(γ + log a)/a for the three terms of |F|².
    const auto ln = [&](double a) { return -(gamma_e + std::log(a)) / a; };
    const double lc = std::exp((ln(2.0 * s) - 2.0 * ln(3.0 * s) + ln(4.0 * s)) / f2);
    const double d = expmix_kernel_l2sq(order, F) / f2;
    est.lambda[i] = lc;
    est.density[i] = d;
    est.reference[i] = bipower(lc, 1.5, 0.5 * (order.nu + 1.0));
    est.ratio[i] = d / bipower(lc, 0.5, 0.5 * (order.nu - 1.0));
  });
  // Probes come in decreasing λ; store ascending.
  const auto rev = [](std::vector<double>& v) { std::reverse(v.begin(), v.end()); };
  rev(est.lambda);
  rev(est.density);
  rev(est.reference);
  rev(est.ratio);

  est.ratio_min = std::numeric_limits<double>::infinity();
  est.ratio_max = 0.0;
  for (double r : est.ratio) {
    est.ratio_min = std::min(est.ratio_min, r);
    est.ratio_max = std::max(est.ratio_max, r);
  }
  const auto slope = [&](auto keep) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
      if (!keep(est.lambda[i]) || !(est.density[i] > 0.0)) continue;
      const double x = std::log(est.lambda[i]);
      const double y = std::log(est.density[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    if (cnt < 2) return std::numeric_limits<double>::quiet_NaN();
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  };
  est.slope_small = slope([&](double l) { return l <= opt.small_band; });
  est.slope_large = slope([&](double l) { return l >= opt.large_band; });
  return est;
}

}  // namespace kingman
