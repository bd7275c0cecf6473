#pragma once

namespace kingman {

// Hypergroup order ν ≥ 1 with its normalizing constants
//   κ_ν = 2^{ν/2−1} Γ(ν/2),   c_ν = 2^{ν−1} B(ν/2, ν/2).
struct Order {
  double nu = 1.0;
  double kappa = 0.0;
  double c = 0.0;

  double bessel_index() const { return 0.5 * nu - 1.0; }
};

Order make_order(double nu);
double kappa_of(double nu);
double c_of(double nu);

double gamma_fn(double x);
double beta_fn(double a, double b);

// J_s(t) for s ≥ −1/2, t ≥ 0. Power series for t ≤ 8, Steed's continued
// fractions up to max(25, s²), Hankel's asymptotic expansion beyond.
double bessel_j(double s, double t);

// j^ν(t) = κ_ν J_{ν/2−1}(t) / t^{ν/2−1}, even in t, j^ν(0) = 1.
double j_kernel(const Order& order, double t);
double j_kernel(double nu, double t);

// arccosh(y) for y ≥ 1; values within 1e−12 below 1 clamp to 0.
double arccosh_stable(double y);
// arccosh(1 + δ) without forming 1 + δ.
double arccosh1p(double delta);

}  // namespace kingman
