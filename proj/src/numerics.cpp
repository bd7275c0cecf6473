#include "kingman/numerics.hpp"

#include <algorithm>
#include <cmath>
// pchip.hpp in Boost 1.74 calls unqualified isnan.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>
#include <limits>
#include <numbers>

#include "kingman/errors.hpp"

namespace kingman {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
}

GaussRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("Gauss rule needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double two_k = 2.0 * k + ab;
    jac(k, k) = (k == 0) ? (beta - alpha) / (ab + 2.0)
                         : (beta * beta - alpha * alpha) / (two_k * (two_k + 2.0));
    if (k > 0) {
      const double kk = k;
      // At k = 1 the factor (k + α + β) cancels against (2k + α + β − 1).
      const double ratio = (k == 1) ? 4.0 * (1.0 + alpha) * (1.0 + beta) /
                                          (two_k * two_k * (two_k + 1.0))
                                    : 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                                          (two_k * two_k * (two_k + 1.0) * (two_k - 1.0));
      const double off = std::sqrt(ratio);
      jac(k, k - 1) = off;
      jac(k - 1, k) = off;
    }
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

GaussRule gauss_legendre(int n) {
  GaussRule rule = gauss_jacobi(n, 0.0, 0.0);
  // Symmetrize to remove eigensolver noise.
  for (int k = 0; k < n / 2; ++k) {
    const int m = n - 1 - k;
    const double x = 0.5 * (rule.nodes[m] - rule.nodes[k]);
    const double w = 0.5 * (rule.weights[m] + rule.weights[k]);
    rule.nodes[k] = -x;
    rule.nodes[m] = x;
    rule.weights[k] = rule.weights[m] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w[j] *= (nodes[j] - nodes[k]);
    w[j] = 1.0 / w[j];
  }
  // Rescale to keep magnitudes near one; the interpolant is invariant.
  double big = 0.0;
  for (double v : w) big = std::max(big, std::abs(v));
  for (double& v : w) v /= big;
  return w;
}

std::string to_string(DecayClass d) {
  switch (d) {
    case DecayClass::gaussian: return "gaussian";
    case DecayClass::exponential: return "exponential";
    case DecayClass::polynomial: return "polynomial";
  }
  return "gaussian";
}

std::string to_string(GridLayout l) {
  switch (l) {
    case GridLayout::geometric: return "geometric";
    case GridLayout::uniform: return "uniform";
    case GridLayout::composite: return "composite";
  }
  return "composite";
}

DecayClass parse_decay_class(const std::string& s) {
  if (s == "gaussian") return DecayClass::gaussian;
  if (s == "exponential") return DecayClass::exponential;
  if (s == "polynomial") return DecayClass::polynomial;
  throw ParseError("unknown decay class '" + s + "'");
}

GridLayout parse_layout(const std::string& s) {
  if (s == "geometric") return GridLayout::geometric;
  if (s == "uniform") return GridLayout::uniform;
  if (s == "composite") return GridLayout::composite;
  throw ParseError("unknown grid layout '" + s + "'");
}

HalfLineGrid grid_from_breaks(double nu, std::vector<double> breaks, int panel_order,
                              GridLayout layout) {
  if (!(nu >= 1.0)) throw DomainError("order nu must be >= 1");
  if (panel_order < 2) throw DomainError("panel order must be at least 2");
  if (breaks.size() < 2 || breaks.front() != 0.0)
    throw DomainError("grid breaks must start at 0 and contain a panel");
  for (std::size_t k = 1; k < breaks.size(); ++k)
    if (!(breaks[k] > breaks[k - 1])) throw DomainError("grid breaks must increase");

  const GaussRule first = gauss_jacobi(panel_order, 0.0, nu - 1.0);
  const GaussRule rest = gauss_legendre(panel_order);

  HalfLineGrid g;
  g.nu = nu;
  g.x_max = breaks.back();
  g.panel_order = panel_order;
  g.layout = layout;
  g.breaks = std::move(breaks);
  g.nodes.reserve(g.panels() * panel_order);
  g.weights.reserve(g.panels() * panel_order);
  for (std::size_t k = 0; k < g.panels(); ++k) {
    const double a = g.breaks[k];
    const double b = g.breaks[k + 1];
    if (k == 0) {
      const double scale = std::pow(0.5 * b, nu);
      for (int j = 0; j < panel_order; ++j) {
        g.nodes.push_back(0.5 * b * (1.0 + first.nodes[j]));
        g.weights.push_back(first.weights[j] * scale);
      }
    } else {
      const double half = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      for (int j = 0; j < panel_order; ++j) {
        const double x = mid + half * rest.nodes[j];
        g.nodes.push_back(x);
        g.weights.push_back(rest.weights[j] * half * std::pow(x, nu - 1.0));
      }
    }
  }
  g.bary_first = barycentric_weights(first.nodes);
  g.bary_rest = barycentric_weights(rest.nodes);
  return g;
}

HalfLineGrid build_grid(double nu, double x_max, int n_nodes, GridLayout layout,
                        const GridOptions& options) {
  if (!(nu >= 1.0)) throw DomainError("order nu must be >= 1");
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");
  if (n_nodes < 8) throw DomainError("a grid needs at least 8 nodes");
  const int p = options.panel_order;
  if (p < 2) throw DomainError("panel order must be at least 2");
  const int n_panels = std::max(1, (n_nodes + p - 1) / p);
  const double x_min =
      options.x_min > 0.0 ? options.x_min : 1e-3 * std::min(1.0, x_max);
  if (!(x_min < x_max) && layout != GridLayout::uniform)
    throw DomainError("x_min must lie below x_max");

  std::vector<double> breaks{0.0};
  switch (layout) {
    case GridLayout::uniform:
      for (int k = 1; k <= n_panels; ++k) breaks.push_back(x_max * k / n_panels);
      break;
    case GridLayout::geometric: {
      if (n_panels == 1) {
        breaks.push_back(x_max);
        break;
      }
      const int m = n_panels - 1;
      const double q = std::pow(x_max / x_min, 1.0 / m);
      for (int k = 0; k < m; ++k) breaks.push_back(x_min * std::pow(q, k));
      breaks.push_back(x_max);
      break;
    }
    case GridLayout::composite: {
      const double knee = std::min(1.0, x_max);
      const double r = options.geometric_ratio > 1.0 ? options.geometric_ratio : 2.0;
      const int n_geo = std::max(1, static_cast<int>(std::ceil(std::log(knee / x_min) / std::log(r))));
      const double q = std::pow(knee / x_min, 1.0 / n_geo);
      for (int k = 0; k < n_geo; ++k) breaks.push_back(x_min * std::pow(q, k));
      breaks.push_back(knee);
      if (x_max > knee) {
        const int n_uni = std::max(1, n_panels - n_geo - 1);
        for (int k = 1; k <= n_uni; ++k) breaks.push_back(knee + (x_max - knee) * k / n_uni);
      }
      break;
    }
  }
  breaks.back() = x_max;
  return grid_from_breaks(nu, std::move(breaks), p, layout);
}

double HalfLineGrid::integrate(std::span<const double> values) const {
  if (values.size() != nodes.size()) throw DomainError("profile length does not match grid");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

double HalfLineGrid::interpolate(std::span<const double> values, double z) const {
  z = std::abs(z);
  if (z > x_max) return 0.0;
  const std::size_t np = panels();
  auto it = std::upper_bound(breaks.begin(), breaks.end(), z);
  std::size_t k = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  if (k >= np) k = np - 1;
  const std::size_t p = static_cast<std::size_t>(panel_order);
  const std::size_t base = k * p;
  const std::vector<double>& bw = k == 0 ? bary_first : bary_rest;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double d = z - nodes[base + j];
    if (d == 0.0) return values[base + j];
    const double c = bw[j] / d;
    num += c * values[base + j];
    den += c;
  }
  return num / den;
}

PlaneGrid build_plane(HalfLineGrid x_grid, double u_max, int n_u) {
  if (!(u_max > 0.0)) throw DomainError("u_max must be positive");
  if (n_u < 3) throw DomainError("a plane grid needs at least 3 u-nodes");
  if (n_u % 2 == 0) ++n_u;
  PlaneGrid p;
  p.x_grid = std::move(x_grid);
  p.u_max = u_max;
  p.u_step = 2.0 * u_max / (n_u - 1);
  p.u_nodes.resize(n_u);
  p.u_weights.assign(n_u, p.u_step);
  const int half = n_u / 2;
  for (int i = 0; i < n_u; ++i) p.u_nodes[i] = (i - half) * p.u_step;
  p.u_weights.front() *= 0.5;
  p.u_weights.back() *= 0.5;
  return p;
}

double PlaneGrid::integrate(std::span<const double> values) const {
  if (values.size() != size()) throw DomainError("field length does not match plane grid");
  double s = 0.0;
  for (std::size_t iu = 0; iu < nu_nodes(); ++iu) {
    double row = 0.0;
    for (std::size_t ix = 0; ix < nx(); ++ix) row += x_grid.weights[ix] * values[index(iu, ix)];
    s += u_weights[iu] * row;
  }
  return s;
}

namespace {

QuadResult gk_panel(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
  using boost::math::quadrature::gauss_kronrod;
  QuadResult r;
  r.value = gauss_kronrod<double, 21>::integrate(
      f, a, b, static_cast<unsigned>(spec.max_subdivisions), spec.rel_tol, &r.error, &r.l1);
  return r;
}

}  // namespace

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec) {
  spec.validate();
  QuadResult r = gk_panel(f, a, b, spec);
  if (!std::isfinite(r.value)) throw NonConvergent("integrand produced a non-finite value");
  if (r.error > std::max(spec.abs_tol, 10.0 * spec.rel_tol * r.l1))
    throw NonConvergent("adaptive quadrature did not reach tolerance on [" + std::to_string(a) +
                        ", " + std::to_string(b) + "]");
  return r;
}

QuadResult integrate_halfline(const std::function<double(double)>& f, double nu,
                              const QuadratureSpec& spec, DecayClass decay) {
  if (!(nu >= 1.0)) throw DomainError("order nu must be >= 1");
  spec.validate();
  const auto g = [&](double x) { return x > 0.0 ? f(x) * std::pow(x, nu - 1.0) : (nu == 1.0 ? f(0.0) : 0.0); };
  QuadResult total = gk_panel(g, 0.0, 1.0, spec);
  double prev = std::abs(total.value);
  int quiet = 0;
  for (int k = 0; k < 64; ++k) {
    const double a = std::ldexp(1.0, k);
    const QuadResult panel = gk_panel(g, a, 2.0 * a, spec);
    total.value += panel.value;
    total.error += panel.error;
    total.l1 += panel.l1;
    if (!std::isfinite(total.value)) throw NonConvergent("integrand produced a non-finite value");
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total.value));
    const double mag = std::abs(panel.value);
    double tail = mag;
    if (decay == DecayClass::polynomial && prev > 0.0) {
      const double ratio = mag / prev;
      tail = ratio < 0.9 ? mag * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
    }
    prev = mag;
    quiet = (tail <= 0.01 * target) ? quiet + 1 : 0;
    if (quiet >= 2) {
      total.error += tail;
      if (total.error > target)
        throw NonConvergent("half-line quadrature error " + std::to_string(total.error) +
                            " exceeds tolerance");
      return total;
    }
  }
  throw NonConvergent("half-line integrand did not decay within the panel budget");
}

ComplexQuadResult integrate_halfline_complex(const std::function<std::complex<double>(double)>& f,
                                             double nu, const QuadratureSpec& spec, DecayClass decay) {
  using Real = std::function<double(double)>;
  const QuadResult re = integrate_halfline(Real([&](double x) { return f(x).real(); }), nu, spec, decay);
  const QuadResult im = integrate_halfline(Real([&](double x) { return f(x).imag(); }), nu, spec, decay);
  return {{re.value, im.value}, std::hypot(re.error, im.error)};
}

namespace {

double wynn_estimate(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return 0.0;
  if (n < 3) return s.back();
  std::vector<double> prev(n + 1, 0.0);  // column −1
  std::vector<double> cur(s.begin(), s.end());
  double best = s.back();
  for (std::size_t col = 1; col < n; ++col) {
    std::vector<double> next(n - col);
    for (std::size_t k = 0; k + col < n; ++k) {
      const double diff = cur[k + 1] - cur[k];
      if (diff == 0.0 || !std::isfinite(diff)) return best;
      next[k] = prev[k + 1] + 1.0 / diff;
    }
    if (col % 2 == 0) best = next.back();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return std::isfinite(best) ? best : s.back();
}

}  // namespace

std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums) {
  const std::size_t n = partial_sums.size();
  const double est = wynn_estimate(partial_sums);
  if (n < 4) return {est, n >= 2 ? std::abs(partial_sums[n - 1] - partial_sums[n - 2]) : 0.0};
  const double before = wynn_estimate(partial_sums.first(n - 1));
  return {est, std::abs(est - before)};
}

QuadResult integrate_oscillatory(const std::function<double(double)>& f, double omega,
                                 double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(omega > 0.0)) throw DomainError("oscillation frequency must be positive");
  if (!(b > a)) return {};
  const double half_period = std::numbers::pi / omega;
  const auto g = [&](double th) { return f(th) * std::sin(omega * th); };
  const bool infinite = !std::isfinite(b);

  QuadratureSpec panel_spec = spec;
  panel_spec.rel_tol = std::min(spec.rel_tol, 1e-12);

  std::vector<double> sums;
  QuadResult out;
  double sum = 0.0;
  double lo = a;
  double hi = (std::floor(a / half_period) + 1.0) * half_period;
  int quiet = 0;
  double last_wynn_err = std::numeric_limits<double>::infinity();
  constexpr int max_panels = 20000;
  for (int k = 0; k < max_panels; ++k) {
    if (!infinite && hi >= b) hi = b;
    const QuadResult p = gk_panel(g, lo, hi, panel_spec);
    if (!std::isfinite(p.value)) throw NonConvergent("oscillatory integrand is not finite");
    sum += p.value;
    out.error += p.error;
    out.l1 += p.l1;
    sums.push_back(sum);
    if (!infinite && hi >= b) {
      out.value = sum;
      out.error += std::numeric_limits<double>::epsilon() * out.l1;
      return out;
    }
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(sum));
    quiet = (std::abs(p.value) <= 1e-3 * target && p.l1 <= 1e-3 * std::max(target, out.l1 * 1e-16))
                ? quiet + 1
                : (std::abs(p.value) <= 1e-3 * target ? quiet + 1 : 0);
    if (quiet >= 3) {
      out.value = sum;
      out.error += std::abs(p.value) + std::numeric_limits<double>::epsilon() * out.l1;
      return out;
    }
    if (spec.split_oscillation && sums.size() >= 8) {
      const std::size_t window = std::min<std::size_t>(sums.size(), 40);
      const auto [est, err] = wynn_epsilon(std::span<const double>(sums).last(window));
      const double t2 = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));
      if (err <= t2 && last_wynn_err <= t2) {
        out.value = est;
        out.error += err + std::numeric_limits<double>::epsilon() * out.l1;
        return out;
      }
      last_wynn_err = err;
    }
    lo = hi;
    hi += half_period;
  }
  throw NonConvergent("oscillatory series did not converge within the panel budget");
}

std::vector<double> monotone_cubic_resample(std::span<const double> xs,
                                            std::span<const double> ys,
                                            std::span<const double> zs) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DomainError("resampling needs matching abscissae and values");
  std::vector<double> out(zs.size(), 0.0);
  if (xs.size() < 4) {
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double z = zs[i];
      if (z < xs.front() || z > xs.back()) continue;
      auto it = std::upper_bound(xs.begin(), xs.end(), z);
      std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - xs.begin()), xs.size() - 1);
      if (k == 0) k = 1;
      const double t = (z - xs[k - 1]) / (xs[k] - xs[k - 1]);
      out[i] = (1.0 - t) * ys[k - 1] + t * ys[k];
    }
    return out;
  }
  using boost::math::interpolators::pchip;
  pchip<std::vector<double>> spline(std::vector<double>(xs.begin(), xs.end()),
                                    std::vector<double>(ys.begin(), ys.end()));
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double z = zs[i];
    if (z < xs.front() || z > xs.back()) continue;
    out[i] = spline(z);
  }
  return out;
}

}  // namespace kingman
