#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kingman/bessel_hypergroup.hpp"
#include "kingman/numerics.hpp"
#include "kingman/specfun.hpp"

namespace kingman {

struct GPoint {
  double x = 0.0;
  double u = 0.0;
};

GPoint inverse(const GPoint& p);  // (e^{−u}x, −u)
double modular(const Order& order, const GPoint& p);

// ϱ(p, q) = arccosh(cosh(u−u′) + |x−x′|²/(2e^{u+u′})).
double distance(const GPoint& p, const GPoint& q);
double gnorm(const GPoint& p);  // ϱ((0,0), p)
// cosh ϱ((0,0), (x,u)) − 1, computed without cancellation.
double gnorm_cosh_m1(double x, double u);

// A function on G_ν sampled on a plane grid, values indexed by plane.index(iu, ix).
struct KernelField {
  PlaneGrid plane;
  std::vector<double> values;
  double nu = 1.0;

  double& at(std::size_t iu, std::size_t ix) { return values[plane.index(iu, ix)]; }
  double at(std::size_t iu, std::size_t ix) const { return values[plane.index(iu, ix)]; }
  // Panel interpolation in x, cubic Lagrange in u; zero off the grid.
  double value_at(double x, double u) const;
  std::vector<double> row(std::size_t iu) const;

  double integral() const { return plane.integrate(values); }
  double lp_norm(double p) const;  // right Haar measure; p = ∞ allowed
  double l1() const { return lp_norm(1.0); }
  double l2() const { return lp_norm(2.0); }
  double linf() const;
  void validate() const;
};

KernelField sample_field(const PlaneGrid& plane, double nu,
                         const std::function<double(double, double)>& f);

// ‖a − b‖_p / ‖b‖_p on a shared plane.
double relative_lp_error(const KernelField& a, const KernelField& b, double p);

struct GTranslateOptions {
  TranslateOptions hankel;
  double lost_mass_tol = 1e-6;  // relative L¹ mass that may leave the grid
};

// ℓ_{(x,u)} f(y,v) = τ^{[x]} f(e^u y, u+v).
KernelField left_translate(const Order& order, const GPoint& p, const KernelField& f,
                           const GTranslateOptions& opt = {});
// r_{(x,u)} f(y,v) = τ^{[e^v x]} f(y, u+v).
KernelField right_translate(const Order& order, const GPoint& p, const KernelField& f,
                            const GTranslateOptions& opt = {});

enum class ConvolveMethod { spectral, direct };

struct GConvolveOptions {
  ConvolveMethod method = ConvolveMethod::spectral;
  double zeta_lo = 1e-7;  // spectral method: Hankel variable range
  double zeta_hi = 20.0;
  int zeta_refine = 8;  // ζ log-step = u-step / zeta_refine
  TranslateOptions hankel;  // direct method
};

// f ⋄_ν g on f's plane. The spectral method applies the Hankel transform in
// x row by row, where ⋄_ν becomes a dilation-twisted convolution in u on a
// log-uniform ζ-grid whose step divides the u-step. Both transforms are
// smoothly windowed where the x-panels or the ζ-steps stop resolving
// j^ν(xζ). The direct method
// evaluates the double integral with explicit translations.
KernelField g_convolve(const Order& order, const KernelField& f, const KernelField& g,
                       const GConvolveOptions& opt = {});

// c_ν ∫₀^{r_max} f(r) sinh^ν r dr; breakpoints split the range.
double radial_integrate(const Order& order, const std::function<double(double)>& f,
                        double r_max, const std::vector<double>& breakpoints = {},
                        const QuadratureSpec& spec = {});
// ∫ f(|p|) dμ_ν du on the plane, optionally with the left Haar weight e^{−νu}.
double radial_integrate_plane(const Order& order, const std::function<double(double)>& f,
                              const PlaneGrid& plane, bool left_haar = false);

KernelField ball_indicator(const Order& order, double r, const PlaneGrid& plane);

struct BallBound {
  double lhs = 0.0;  // ∫ f(|p|) e^{−νu} x^ν dμ_ν du
  double rhs = 0.0;  // ∫ f(|p|) |p| dμ_ν du
  double ratio = 0.0;
};
BallBound weighted_ball_bound(const Order& order, const std::function<double(double)>& f,
                              const PlaneGrid& plane);

// Delimited text: '#' header (ν, grid specs), then "x,u,value" rows.
void write_field(std::ostream& os, const KernelField& f);
KernelField read_field(std::istream& is);
void save_field(const std::string& path, const KernelField& f);
KernelField load_field(const std::string& path);

}  // namespace kingman
