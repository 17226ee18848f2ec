#pragma once

namespace cqtf {

/// Surface measure of the unit sphere in R^d, d in {1, 2, 3}.
double omega_d(int d);

/// Closed-form limit profile u(r) = (mu - C0 r^p)_+^{1/4} of the
/// quintic-plus-trap functional at unit mass.
struct TFProfile {
  int d = 1;
  double p = 2.0;
  double C0 = 1.0;
  double mu_tf = 0.0;
  double radius = 0.0;  // support edge (mu_tf / C0)^{1/p}
  double omega_d = 2.0;

  double operator()(double r) const;
};

/// Multiplier fixed by unit mass: (p / (omega_d C0^{-d/p} B(d/p, 3/2)))^{2p/(2d+p)}.
double mu_tf(int d, double p, double C0);

TFProfile tf_profile(int d, double p, double C0);

/// Profile value; zero on and beyond the support edge.
double u_tf(const TFProfile& profile, double r);

struct TFIntegrals {
  double mass = 0.0;           // int u^2
  double quintic_norm = 0.0;   // int u^6
  double weighted_mass = 0.0;  // int |x|^p u^2 (no C0, no 1/2)
  double tf_energy = 0.0;      // (2d+p)/(6p) int u^6
};

/// Beta-function closed forms. Each value is compared against
/// tf_integrals_quadrature and a mismatch above 1e-9 relative throws
/// ConsistencyError.
TFIntegrals tf_integrals(const TFProfile& profile);

/// Same integrals by tanh-sinh quadrature over the support.
TFIntegrals tf_integrals_quadrature(const TFProfile& profile);

/// lim E(N) / N^{2p/(2d+p)} in closed form; must agree with
/// tf_integrals().tf_energy to 1e-10 relative (ConsistencyError otherwise).
double energy_limit_constant(int d, double p, double C0);

}  // namespace cqtf
