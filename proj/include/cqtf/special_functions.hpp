#pragma once

namespace cqtf {

struct LogGamma {
  double value;  // ln|Gamma(x)|
  int sign;      // sign of Gamma(x)
};

/// Lanczos (g = 7, 9 terms) with reflection below 1/2. DomainError at poles.
LogGamma log_gamma(double x);
double gamma_fn(double x);

/// B(P, Q) = Gamma(P) Gamma(Q) / Gamma(P + Q) for P > 0 and Q, P + Q off the
/// poles. The first evaluation of each (P, Q) with Q > 0 in a process is
/// checked against quadrature of the defining integral (ConsistencyError if
/// they disagree beyond 1e-10 relative).
double beta_fn(double P, double Q);

/// Tanh-sinh quadrature of int_0^1 x^{P-1} (1-x)^{Q-1} dx, P, Q > 0.
double beta_quadrature(double P, double Q);

}  // namespace cqtf
