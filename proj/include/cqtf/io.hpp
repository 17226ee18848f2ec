#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cqtf/diagnostics.hpp"
#include "cqtf/minimizer.hpp"

namespace cqtf {

/// %.17g; non-finite values become the strings "inf", "-inf", "nan".
std::string format_number(double x);

/// GroundState summary: N, tau, kappa, energy parts, e_tau, mu_tau,
/// residuals, iterations, grid and flow statistics.
std::string ground_state_json(const GroundState& state, bool converged = true);

/// TF constants for (d, p, C0): mu_tf, radius, integrals, e_tf, limit constant.
std::string tf_table_json(int d, double p, double C0);

std::string report_json(const ConvergenceReport& report,
                        const std::vector<CriterionResult>& criteria);

/// Columns N,tau,e_tau,err_energy,mu_tau,err_mu,l2_err,l6_err,sup_K,sup_inner,max_outside.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

/// One line per criterion plus the fitted exponents.
void write_report_summary(std::ostream& out, const ConvergenceReport& report,
                          const std::vector<CriterionResult>& criteria);

}  // namespace cqtf
