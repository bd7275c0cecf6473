#include "kingman/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kingman/errors.hpp"

namespace kingman {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kSeriesMax = 8.0;

// Σ_k (−t²/4)^k / (k! (a)_k); j^ν uses a = ν/2, J_s uses a = s + 1.
double hyper0f1_series(double a, double t) {
  const double z = -0.25 * t * t;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= z / (k * (a + k - 1.0));
    sum += term;
    if (std::abs(term) <= kEps * 1e-2 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_series(double s, double t) {
  const double lead = std::exp(s * std::log(0.5 * t) - std::lgamma(s + 1.0));
  // Γ(s+1) > 0 for s > −1, so lgamma carries no sign.
  return lead * hyper0f1_series(s + 1.0, t);
}

// Steed's method (continued fractions CF1 and CF2 with the Wronskian),
// valid for t ≥ 2; J part only.
double bessel_steed(double s, double x) {
  const int nl = std::max(0, static_cast<int>(s - x + 1.5));
  const double mu = s - nl;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  int isign = 1;
  double h = s * xi;
  if (std::abs(h) < kTiny) h = kTiny;
  double b = xi2 * s;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i < 100000; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i >= 100000) throw NonConvergent("Bessel CF1 did not converge");

  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  double fact = s * xi;
  for (int l = nl; l >= 1; --l) {
    const double tmp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * tmp - rjl;
    rjl = tmp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - mu * mu;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double tmp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = tmp;
  for (i = 2; i < 100000; ++i) {
    a += 2.0 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di = -di / den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    tmp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = tmp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i >= 100000) throw NonConvergent("Bessel CF2 did not converge");

  const double w = xi2 / std::numbers::pi;
  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  return rjl1 * (rjmu / rjl);
}

double bessel_hankel_asymptotic(double s, double t) {
  const double m = 4.0 * s * s;
  double pr = 0.0;
  double qr = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) term *= (m - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * t);
    const double mag = std::abs(term);
    if (mag > last) break;  // smallest term reached
    const int r = k % 4;
    const double signed_term = (r == 0 || r == 1) ? term : -term;
    if (k % 2 == 0) pr += signed_term; else qr += signed_term;
    if (mag < kEps * 1e-3) break;
    last = mag;
  }
  const double phase = (0.5 * s + 0.25) * std::numbers::pi;
  const double ct = std::cos(t);
  const double st = std::sin(t);
  const double cphi = std::cos(phase);
  const double sphi = std::sin(phase);
  const double cchi = ct * cphi + st * sphi;
  const double schi = st * cphi - ct * sphi;
  return std::sqrt(2.0 / (std::numbers::pi * t)) * (pr * cchi - qr * schi);
}

}  // namespace

double gamma_fn(double x) { return std::tgamma(x); }

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta function needs positive arguments");
  if (a + b < 170.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double kappa_of(double nu) { return std::exp2(0.5 * nu - 1.0) * std::tgamma(0.5 * nu); }
double c_of(double nu) { return std::exp2(nu - 1.0) * beta_fn(0.5 * nu, 0.5 * nu); }

Order make_order(double nu) {
  if (!(nu >= 1.0) || !std::isfinite(nu)) throw DomainError("order nu must be >= 1");
  return Order{nu, kappa_of(nu), c_of(nu)};
}

double bessel_j(double s, double t) {
  if (!(s >= -0.5)) throw DomainError("Bessel order must be >= -1/2");
  if (!(t >= 0.0)) throw DomainError("Bessel argument must be >= 0");
  if (t == 0.0) {
    if (s == 0.0) return 1.0;
    return s > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (t <= kSeriesMax) return bessel_series(s, t);
  if (t < std::max(25.0, s * s)) return bessel_steed(s, t);
  return bessel_hankel_asymptotic(s, t);
}

double j_kernel(const Order& order, double t) {
  t = std::abs(t);
  if (t <= kSeriesMax) return hyper0f1_series(0.5 * order.nu, t);
  const double s = order.bessel_index();
  return order.kappa * bessel_j(s, t) * std::pow(t, -s);
}

double j_kernel(double nu, double t) { return j_kernel(make_order(nu), t); }

double arccosh1p(double delta) {
  if (delta < 0.0) throw DomainError("arccosh1p needs a nonnegative argument");
  if (delta > 1.0) return std::acosh(1.0 + delta);
  return std::log1p(delta + std::sqrt(delta * (2.0 + delta)));
}

double arccosh_stable(double y) {
  if (!(y >= 1.0 - 1e-12)) throw DomainError("arccosh argument below 1");
  if (y <= 1.0) return 0.0;
  return arccosh1p(y - 1.0);
}

}  // namespace kingman
