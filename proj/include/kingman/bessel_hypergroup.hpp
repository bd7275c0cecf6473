#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kingman/numerics.hpp"
#include "kingman/specfun.hpp"

namespace kingman {

// A function on X_ν sampled at the nodes of a half-line grid.
struct RadialProfile {
  HalfLineGrid grid;
  std::vector<double> values;
  DecayClass decay = DecayClass::gaussian;

  double at(double x) const { return grid.interpolate(values, x); }
  double integral() const { return grid.integrate(values); }
  double l1() const;
  double l2() const;
  double linf() const;
  void validate() const;
};

RadialProfile sample_profile(const HalfLineGrid& grid, const std::function<double(double)>& f,
                             DecayClass decay = DecayClass::gaussian);

// Monotone cubic resampling onto another grid; zero beyond the source x_max.
RadialProfile resample(const RadialProfile& f, const HalfLineGrid& grid);

struct DeltaPair {
  double x = 0.0;
  double y = 0.0;
};

// The probability measure δ_x ∗_ν δ_y on [|x−y|, x+y]. It is stored as a
// discrete quadrature measure (atoms/masses); for ν > 1 the continuous
// density with respect to dz is available too.
struct DeltaMeasure {
  double nu = 1.0;
  double x = 0.0;
  double y = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool atomic = true;
  std::vector<double> atoms;
  std::vector<double> masses;

  double total_mass() const;
  double density(double z) const;  // 0 for atomic measures
};

DeltaMeasure delta_convolve(const Order& order, const DeltaPair& pair, int n_nodes = 64);

struct TranslateOptions {
  double rel_tol = 1e-8;  // relative to sup|f|
  int min_nodes = 16;
  int max_nodes = 512;
};

// τ^{[x]} f at a single point y.
double hankel_translate_at(const Order& order, double x, double y, const RadialProfile& f,
                           const TranslateOptions& opt = {});

// τ^{[x]} f sampled on f's grid.
RadialProfile hankel_translate(const Order& order, double x, const RadialProfile& f,
                               const TranslateOptions& opt = {});

// (f ∗_ν g)(x) = ∫ τ^{[x]}f(y) g(y) dμ_ν(y), on out_grid (default f's grid).
RadialProfile hankel_convolve(const Order& order, const RadialProfile& f, const RadialProfile& g,
                              const std::optional<HalfLineGrid>& out_grid = std::nullopt,
                              const TranslateOptions& opt = {});

struct TransformOptions {
  double tail_tol = 1e-8;  // admissible truncated tail, relative to ‖f‖₁
};

// H_ν f(x) = ∫ f(y) j^ν(xy) dμ_ν(y) on out_grid (default f's grid).
RadialProfile hankel_transform(const Order& order, const RadialProfile& f,
                               const std::optional<HalfLineGrid>& out_grid = std::nullopt,
                               const TransformOptions& opt = {});
RadialProfile hankel_inverse(const Order& order, const RadialProfile& g,
                             const std::optional<HalfLineGrid>& out_grid = std::nullopt,
                             const TransformOptions& opt = {});

// Relative tail of ∫|f| dμ_ν beyond the grid, estimated from the last panel.
double truncation_tail(const RadialProfile& f);

struct BesselMultiplierKernel {
  RadialProfile kernel;
  double plancherel_l2sq = 0.0;  // (2κ²)^{−1} ∫ |F(λ)|² λ^{ν/2−1} dλ
  double measured_l2sq = 0.0;    // ‖K‖² on the output grid
};

// K_{F(L_ν)} = H_ν^{−1}(y ↦ F(y²)); the y-integral runs over spectral_grid.
BesselMultiplierKernel bessel_multiplier_kernel(const Order& order,
                                                const std::function<double(double)>& F,
                                                const HalfLineGrid& spectral_grid,
                                                const HalfLineGrid& out_grid);
// F given by samples (λ_k, F_k), interpolated monotonically, zero beyond.
BesselMultiplierKernel bessel_multiplier_kernel(const Order& order,
                                                const std::vector<double>& lambda,
                                                const std::vector<double>& values,
                                                const HalfLineGrid& spectral_grid,
                                                const HalfLineGrid& out_grid);

// 2/(Γ(ν/2)(4t)^{ν/2}) exp(−x²/4t).
double bessel_heat_value(const Order& order, double t, double x);
RadialProfile bessel_heat_kernel(const Order& order, double t, const HalfLineGrid& out_grid);

// Text format: '#'-prefixed header carrying ν, x_max, decay class and the
// panel layout, then "x,value" rows.
void write_profile(std::ostream& os, const RadialProfile& f);
RadialProfile read_profile(std::istream& is);
void save_profile(const std::string& path, const RadialProfile& f);
RadialProfile load_profile(const std::string& path);

}  // namespace kingman
