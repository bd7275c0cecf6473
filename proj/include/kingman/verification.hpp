#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kingman/gnu_calculus.hpp"
#include "kingman/gnu_geometry.hpp"
#include "kingman/numerics.hpp"
#include "kingman/specfun.hpp"

namespace kingman {

// Uniform finite-volume plane for the wave solver: x-nodes i·h with cells
// [x_i − h/2, x_i + h/2] ∩ [0, ∞) (weights = cell measure in x^{ν−1}dx),
// u-nodes with the same step h.
PlaneGrid wave_plane(double nu, double h, double x_max, double u_max);

// Leapfrog state for w_tt = −Δ_ν w with Neumann behavior at x = 0.
struct WaveState {
  PlaneGrid plane;
  double nu = 2.0;
  std::vector<double> w_now;
  std::vector<double> w_prev;
  double time = 0.0;
  double dt = 0.0;
  double cfl_margin = 0.4;
  double initial_max = 0.0;
};

// Zero initial velocity; dt = cfl_margin·h/e^{u_max}.
WaveState wave_init(const Order& order, const PlaneGrid& plane,
                    const std::function<double(double, double)>& w0, double cfl_margin = 0.4);
// −Δ_ν w on the plane: centered differences in u, divergence form in x.
std::vector<double> wave_operator(const WaveState& s, const std::vector<double>& w);
WaveState wave_step(const WaveState& s);
// Staggered leapfrog energy between w_prev and w_now.
double wave_energy(const WaveState& s);

struct PropagationOptions {
  double h = 0.1;
  double x_max = 14.0;
  double u_max = 4.0;
  double r0 = 1.0;    // support radius of the initial bump
  double cut = 1e-8;  // bump height at ρ = r0, below every support threshold
  GPoint center{0.0, 0.0};
  double T = 2.0;
  int n_times = 8;  // report times T·k/n_times
  double threshold = 1e-6;  // relative to max|w₀|
  std::vector<double> sensitivity{1e-5, 1e-7};
  double cfl_margin = 0.4;
};

struct PropagationResult {
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> violation;  // max(0, ρ(p, supp w₀) − t) over the numerical support
  std::vector<double> sensitivity_violation;  // at T, one per sensitivity threshold
  double energy_drift = 0.0;  // max relative change of the leapfrog energy
  double max_violation() const;
};

// Gaussian bump around the center, cut to zero at ρ = r0, evolved to T.
PropagationResult propagation_study(const Order& order, const PropagationOptions& opt = {});

// Even pulse evolved on the mirrored line x ∈ [−x_max, x_max] without any
// boundary condition: returns {max odd part, max gap to the Neumann solution},
// both relative to max|w₀|.
std::pair<double, double> reflection_check(const Order& order, const PropagationOptions& opt = {});

// Geometric x-grid to 1e5 with u-rows on ±6.25√t: holds the G_ν heat
// kernel's mass to about 1e-5.
PlaneGrid heat_plane(double nu, double t);
// Composite x-grid on [0, 30], u ∈ [−4, 4].
PlaneGrid interior_plane(double nu);

struct CheckReport {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;
};

CheckReport propagation_report(const Order& order, const PropagationOptions& opt = {});

struct SuiteConfig {
  // Multiplies κ_ν inside the transform checks; 1 leaves them honest.
  double kappa_fault = 1.0;
  double hankel_tol = 1e-6;
  double mass_tol = 1e-3;
  double two_path_tol = 1e-4;
  double semigroup_tol = 1e-2;
  double radiality_tol = 1e-3;
  double radial_tol = 1e-3;
  double plancherel_band = 20.0;
  double translation_tol = 1e-6;
  bool wave = true;
  bool plancherel = true;
};

std::vector<CheckReport> run_suite(const std::vector<double>& nus, const std::vector<double>& ts,
                                   const SuiteConfig& cfg = {});

// One block per check, then a delimited summary table.
void write_reports(std::ostream& os, const std::vector<CheckReport>& reports);

}  // namespace kingman
