#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace kingman {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 15;  // bisection depth per panel
  bool split_oscillation = true;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |integrand|, the cancellation scale
};

struct ComplexQuadResult {
  std::complex<double> value;
  double error = 0.0;
};

// Gauss rules on [-1, 1]; Jacobi weight (1 - x)^alpha (1 + x)^beta.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);
GaussRule gauss_jacobi(int n, double alpha, double beta);

// Barycentric weights of the Lagrange interpolant through the given nodes.
std::vector<double> barycentric_weights(std::span<const double> nodes);

enum class DecayClass { gaussian, exponential, polynomial };
enum class GridLayout { geometric, uniform, composite };

std::string to_string(DecayClass d);
std::string to_string(GridLayout l);
DecayClass parse_decay_class(const std::string& s);
GridLayout parse_layout(const std::string& s);

struct GridOptions {
  int panel_order = 10;
  double x_min = 0.0;        // first geometric breakpoint; 0 selects 1e-3·min(1, x_max)
  double geometric_ratio = 2.0;  // panel ratio in the geometric part of a composite grid
};

// Panel quadrature for ∫₀^{x_max} f(x) x^{ν−1} dx. The panel touching 0 uses
// Gauss–Jacobi nodes for the weight x^{ν−1}; the other panels use
// Gauss–Legendre nodes with x^{ν−1} folded into the weights.
struct HalfLineGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double x_max = 0.0;
  double nu = 1.0;
  std::vector<double> breaks;
  int panel_order = 0;
  GridLayout layout = GridLayout::composite;

  std::size_t size() const { return nodes.size(); }
  std::size_t panels() const { return breaks.empty() ? 0 : breaks.size() - 1; }
  double integrate(std::span<const double> values) const;
  // Panel-local polynomial interpolation; zero beyond x_max.
  double interpolate(std::span<const double> values, double z) const;

  std::vector<double> bary_first;
  std::vector<double> bary_rest;
};

HalfLineGrid build_grid(double nu, double x_max, int n_nodes,
                        GridLayout layout = GridLayout::composite,
                        const GridOptions& options = {});
HalfLineGrid grid_from_breaks(double nu, std::vector<double> breaks, int panel_order,
                              GridLayout layout = GridLayout::composite);

// Tensor grid over X_ν × [−u_max, u_max]: x panels times a uniform trapezoid
// rule in u (odd node count, u = 0 is a node).
struct PlaneGrid {
  HalfLineGrid x_grid;
  std::vector<double> u_nodes;
  std::vector<double> u_weights;
  double u_max = 0.0;
  double u_step = 0.0;

  std::size_t nx() const { return x_grid.size(); }
  std::size_t nu_nodes() const { return u_nodes.size(); }
  std::size_t size() const { return nx() * nu_nodes(); }
  std::size_t index(std::size_t iu, std::size_t ix) const { return iu * nx() + ix; }
  std::size_t u_center() const { return u_nodes.size() / 2; }
  double integrate(std::span<const double> values) const;
};

PlaneGrid build_plane(HalfLineGrid x_grid, double u_max, int n_u);

// Adaptive Gauss–Kronrod on a finite interval.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec = {});

// ∫₀^∞ f(x) x^{ν−1} dx on doubling panels with a decay-class tail estimate.
QuadResult integrate_halfline(const std::function<double(double)>& f, double nu,
                              const QuadratureSpec& spec = {},
                              DecayClass decay = DecayClass::gaussian);
ComplexQuadResult integrate_halfline_complex(const std::function<std::complex<double>(double)>& f,
                                             double nu, const QuadratureSpec& spec = {},
                                             DecayClass decay = DecayClass::gaussian);

// ∫_a^b f(θ) sin(ωθ) dθ (b may be +∞): half-period panels, alternating sum
// accelerated by Wynn's epsilon algorithm.
QuadResult integrate_oscillatory(const std::function<double(double)>& f, double omega,
                                 double a, double b, const QuadratureSpec& spec = {});

// Wynn epsilon extrapolation of a sequence of partial sums; returns the
// estimate and the difference between the last two extrapolants.
std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums);

// Monotone piecewise-cubic (PCHIP) resampling of (xs, ys) at the points zs;
// zero outside [xs.front(), xs.back()].
std::vector<double> monotone_cubic_resample(std::span<const double> xs,
                                            std::span<const double> ys,
                                            std::span<const double> zs);

}  // namespace kingman
