#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "kingman/gnu_geometry.hpp"
#include "kingman/numerics.hpp"
#include "kingman/specfun.hpp"

namespace kingman {

// Smallest heat time accepted by the Ψ_t quadrature.
inline constexpr double kPsiTMin = 0.05;

struct PsiValue {
  double value = 0.0;
  double error = 0.0;  // includes the e^{π²/4t} cancellation amplification
};

struct PsiOptions {
  double rel_tol = 1e-12;
  double max_weighted_error = 1e-8;  // admissible ξ²·error
};

// Ψ_t(ξ) = e^{π²/4t}/(ξ²√(4π³t)) ∫₀^∞ sinh θ sin(πθ/2t) e^{−θ²/4t − cosh θ/ξ} dθ.
PsiValue psi_eval(double t, double xi, const PsiOptions& opt = {});

struct PsiWeightOptions {
  double log_step = 0.1;
  double xi_lo = 1.0 / 700.0;  // below this e^{−1/ξ} underflows
  double xi_hi_max = 1e14;
  double tail_tol = 1e-12;  // stop once ξ^{3/2}|Ψ| drops below tail_tol·C_t
  PsiOptions psi;
};

// Ψ_t on a log-uniform ξ-grid with trapezoid weights for dξ.
struct PsiWeight {
  double t = 0.0;
  std::vector<double> xi;
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<double> weights;
  double bound = 0.0;  // C_t = max ξ²|Ψ_t(ξ)|

  std::size_t size() const { return xi.size(); }
  // ∫ Ψ_t(ξ) g(ξ) dξ, skipping nodes where g underflows.
  double integrate(const std::function<double(double)>& g) const;
};

PsiWeight build_psi_weight(double t, const PsiWeightOptions& opt = {});

// M_{t,u}(λ) = ∫₀^∞ Ψ_t(ξ) exp(−cosh u/ξ − ξλe^u/2) dξ.
double m_function(const PsiWeight& psi, double u, double lambda);
double m_function(double t, double u, double lambda);

enum class HeatMethod { psi, contour };

// K_{e^{−tΔ_ν}}(x,u) from the ξ-integral (eq. psi path).
double g_heat_value(const Order& order, const PsiWeight& psi, double x, double u);
// Same kernel from the θ-integral moved to the line Im θ = π − δ; valid for every t > 0.
double g_heat_value_contour(const Order& order, double t, double x, double u);
// Radial profile k_t(r) = e^{νu/2} K(x,u) at |(x,u)| = r, contour form.
double g_heat_radial(const Order& order, double t, double r);

struct HeatKernelResult {
  KernelField field;
  double min_value = 0.0;
  std::size_t n_negative = 0;  // values below −neg_tol
  double neg_tol = 1e-8;
};

HeatKernelResult g_heat_kernel(const Order& order, double t, const PlaneGrid& plane,
                               HeatMethod method = HeatMethod::psi);

// K_{M_{t,u}(L_ν)}(x) row by row: κ_ν^{−2} ∫ M_{t,u}(y²) j^ν(xy) dμ_ν(y)
// on a y-grid scaled per row.
KernelField heat_kernel_via_multiplier(const Order& order, const PsiWeight& psi,
                                       const PlaneGrid& plane);

// F(λ) = Σ c_j e^{−t_j λ}.
struct ExpMixMultiplier {
  std::vector<std::pair<double, double>> terms;  // (c_j, t_j)
  double residual = 0.0;      // relative weighted residual of a projection
  double residual_abs = 0.0;  // absolute weighted residual

  double operator()(double lambda) const;
  void validate() const;
};

enum class MultiplierPath { linearity, transference };

// K_{F(Δ_ν)} by Σ c_j K_{e^{−t_jΔ_ν}} (linearity) or by Hankel inversion of
// (ΦF)_u = Σ c_j M_{t_j,u} (transference).
KernelField multiplier_kernel(const Order& order, const ExpMixMultiplier& F,
                              const PlaneGrid& plane,
                              MultiplierPath path = MultiplierPath::linearity,
                              HeatMethod method = HeatMethod::psi);

struct ProjectionOptions {
  double nu = 2.0;               // sets the weight λ^{[3/2,(ν+1)/2]}
  double ridge = 1e-13;          // relative to the largest squared singular value
  double max_condition = 1e14;   // of the regularized normal matrix
};

// Least-squares fit by exponentials with log-spaced rates in [t_lo, t_hi].
ExpMixMultiplier project_to_expmix(const std::vector<double>& lambda,
                                   const std::vector<double>& values, int n_terms,
                                   double t_lo, double t_hi, const ProjectionOptions& opt = {});

// λ^{[a,b]}: λ^a for λ ≤ 1, λ^b beyond.
double bipower(double lambda, double a, double b);

struct PlancherelOptions {
  int s_min_exp = -8;  // probe scales s = 2^k, k in [s_min_exp, s_max_exp]
  int s_max_exp = 8;
  double small_band = 0.1;  // slope fits on λ ≤ small_band and λ ≥ large_band
  double large_band = 10.0;
};

struct PlancherelEstimate {
  std::vector<double> lambda;     // log-centroid of each probe
  std::vector<double> density;    // ‖K_F‖² / ∫|F|² dλ
  std::vector<double> reference;  // λ^{[3/2,(ν+1)/2]}
  std::vector<double> ratio;      // density / λ^{[1/2,(ν−1)/2]}
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double slope_small = 0.0;
  double slope_large = 0.0;
};

// ‖K_{F(Δ_ν)}‖²_{L²(G_ν)} for an exponential mixture, by the radial formula.
double expmix_kernel_l2sq(const Order& order, const ExpMixMultiplier& F);

PlancherelEstimate estimate_plancherel(const Order& order, const PlancherelOptions& opt = {});

}  // namespace kingman
