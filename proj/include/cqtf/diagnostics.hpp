#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cqtf/minimizer.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace cqtf {

struct ScalingFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares line through (ln x, ln y).
ScalingFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

struct RegionErrors {
  double l2 = 0.0;
  double l6 = 0.0;
  double sup_K = 0.0;        // over B(radius / 2)
  double sup_inner = 0.0;    // over B(radius - (tau |ln tau|)^eps)
  double max_outside = 0.0;  // max w beyond radius + tau^{p/2-eps} |ln tau|^{-eps}
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

RegionErrors tf_comparison(const GroundState& state, const TFProfile& profile, double epsilon);

struct DecayCheck {
  bool passes = false;
  double decay_beta = 0.0;  // +inf when the band is below the floating-point floor
  double slope = 0.0;       // d/dr ln(r^{(d-1)/2} w)
  std::size_t n_points = 0;
  double band_lo = 0.0;
  double band_hi = 0.0;
};

inline constexpr double kDefaultDecayConstant = 0.05;

/// Fits the log-slope of r^{(d-1)/2} w on the band
/// [R + layer, min(R + 3 layer, r_max - 5h)], layer = tau^{p/2-eps}|ln tau|^{-eps};
/// passes iff slope <= -c tau^{-(p+4)/4}.
DecayCheck exterior_decay_check(const GroundState& state, const TFProfile& profile,
                                double epsilon, double c = kDefaultDecayConstant);

struct LaplacianCheck {
  double sup_laplacian = 0.0;  // sup |Lap w| over r < radius
  double bound_ratio = 0.0;    // sup * tau^{(3p+6)/4}
  double alt_ratio = 0.0;  // sup * tau^{(p+10)/4}
};

LaplacianCheck laplacian_bound_check(const GroundState& state, const TFProfile& profile);

struct ConvergenceRow {
  double N = 0.0;
  double tau = 0.0;
  double e_tau = 0.0;
  double err_energy = 0.0;
  double mu_tau = 0.0;
  double err_mu = 0.0;
  double l2_err = 0.0;
  double l6_err = 0.0;
  double sup_K = 0.0;
  double sup_inner = 0.0;
  double max_outside = 0.0;
  double gradient_energy = 0.0;  // int |grad w|^2
  double laplacian_sup = 0.0;
  double laplacian_ratio = 0.0;
  double laplacian_alt_ratio = 0.0;
  double energy_per_particle = 0.0;  // tau^{-p} e(tau)
  double sup_phi = 0.0;
  double sextic_phi = 0.0;      // int phi_N^6
  double potential_phi = 0.0;   // int V phi_N^2
  double decay_slope = 0.0;
  double decay_beta = 0.0;
  bool decay_passes = false;
  double el_residual = 0.0;
  double pohozaev_residual = 0.0;
};

struct ConvergenceReport {
  int d = 1;
  double p = 2.0;
  double C0 = 1.0;
  int kappa = 1;
  double sigma = 1.0;
  double epsilon = 0.5;
  double mu_tf = 0.0;
  double e_tf = 0.0;
  std::vector<ConvergenceRow> rows;  // decreasing tau

  ScalingFit energy_fit;     // E(N) vs N
  ScalingFit sup_fit;        // sup phi_N vs N
  ScalingFit sextic_fit;     // int phi_N^6 vs N
  ScalingFit potential_fit;  // int V phi_N^2 vs N
  ScalingFit mu_gap_fit;     // |mu_tau - mu_tf| vs tau
  ScalingFit energy_gap_fit; // |e(tau) - e_tf| vs tau
  ScalingFit gradient_fit;   // int |grad w|^2 vs tau
  ScalingFit sup_K_fit;      // sup error on K vs tau
  bool laplacian_ratio_grows = false;
  double decay_beta = 0.0;   // at the smallest tau

  double energy_target() const { return 2.0 * p / (2.0 * d + p); }
  double sup_target() const { return -d / (2.0 * d + p); }
  double sextic_target() const { return -4.0 * d / (2.0 * d + p); }
};

/// Rows and fits for a sweep (at least three states). epsilon <= 0 picks sigma / 2.
ConvergenceReport scaling_report(std::span<const GroundState> states, const TFProfile& profile,
                                 double sigma = 1.0, double epsilon = 0.0);

struct CriterionResult {
  std::string id;
  std::string description;
  bool passed = false;
  bool acceptance = true;  // false: informational, does not affect exit status
  std::string detail;
};

/// Pass/fail evaluation of the sweep-level convergence checks.
std::vector<CriterionResult> evaluate_criteria(const ConvergenceReport& report);

}  // namespace cqtf
