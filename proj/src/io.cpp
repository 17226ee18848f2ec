#include "cqtf/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json_writer.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace cqtf {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

using json = nlohmann::ordered_json;

json fit_json(const ScalingFit& f) {
  return json{{"exponent", f.exponent},
              {"log_prefactor", f.log_prefactor},
              {"r_squared", f.r_squared},
              {"n_points", f.n_points}};
}

}  // namespace

std::string ground_state_json(const GroundState& s, bool converged) {
  const auto& g = s.field_w.grid;
  json j;
  j["converged"] = converged;
  j["N"] = s.N;
  j["tau"] = s.tau;
  j["kappa"] = s.kappa;
  j["d"] = g.d();
  j["p"] = s.p;
  j["grid"] = {{"n", g.size()}, {"r_max", g.r_max()}, {"h", g.h()}};
  j["mass"] = integrate(s.field_w, 2.0);
  j["energy_parts"] = {{"kinetic", s.energy_parts.kinetic},
                       {"potential", s.energy_parts.potential},
                       {"quartic", s.energy_parts.quartic},
                       {"quintic", s.energy_parts.quintic}};
  j["e_tau"] = s.e_tau;
  j["energy_per_particle"] = s.energy_per_particle();
  j["mu_tau"] = s.mu_tau;
  j["residuals"] = {{"euler_lagrange", s.el_residual}, {"pohozaev", s.pohozaev_residual}};
  j["iterations"] = s.iterations;
  j["flow"] = {{"accepted", s.stats.accepted},
               {"rejected", s.stats.rejected},
               {"max_mass_error", s.stats.max_mass_error},
               {"max_energy_increase", s.stats.max_energy_increase},
               {"final_dt", s.stats.final_dt},
               {"last_energy_change", s.stats.last_energy_change}};
  return detail::dump(j);
}

std::string tf_table_json(int d, double p, double C0) {
  const auto prof = tf_profile(d, p, C0);
  const auto ints = tf_integrals(prof);
  json j;
  j["d"] = d;
  j["p"] = p;
  j["C0"] = C0;
  j["mu_tf"] = prof.mu_tf;
  j["radius"] = prof.radius;
  j["mass"] = ints.mass;
  j["quintic_norm"] = ints.quintic_norm;
  j["weighted_mass"] = ints.weighted_mass;
  j["e_tf"] = ints.tf_energy;
  j["limit_constant"] = energy_limit_constant(d, p, C0);
  return detail::dump(j);
}

std::string report_json(const ConvergenceReport& rep, const std::vector<CriterionResult>& criteria) {
  json j;
  j["d"] = rep.d;
  j["p"] = rep.p;
  j["C0"] = rep.C0;
  j["kappa"] = rep.kappa;
  j["sigma"] = rep.sigma;
  j["epsilon"] = rep.epsilon;
  j["mu_tf"] = rep.mu_tf;
  j["e_tf"] = rep.e_tf;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"N", r.N},
                    {"tau", r.tau},
                    {"e_tau", r.e_tau},
                    {"err_energy", r.err_energy},
                    {"mu_tau", r.mu_tau},
                    {"err_mu", r.err_mu},
                    {"l2_err", r.l2_err},
                    {"l6_err", r.l6_err},
                    {"sup_K", r.sup_K},
                    {"sup_inner", r.sup_inner},
                    {"max_outside", r.max_outside},
                    {"gradient_energy", r.gradient_energy},
                    {"laplacian_sup", r.laplacian_sup},
                    {"laplacian_ratio", r.laplacian_ratio},
                    {"laplacian_alt_ratio", r.laplacian_alt_ratio},
                    {"energy_per_particle", r.energy_per_particle},
                    {"sup_phi", r.sup_phi},
                    {"sextic_phi", r.sextic_phi},
                    {"potential_phi", r.potential_phi},
                    {"decay_slope", r.decay_slope},
                    {"decay_beta", r.decay_beta},
                    {"decay_passes", r.decay_passes},
                    {"el_residual", r.el_residual},
                    {"pohozaev_residual", r.pohozaev_residual}});
  }
  j["rows"] = rows;
  j["fits"] = {{"energy", fit_json(rep.energy_fit)},
               {"sup", fit_json(rep.sup_fit)},
               {"sextic", fit_json(rep.sextic_fit)},
               {"potential", fit_json(rep.potential_fit)},
               {"mu_gap", fit_json(rep.mu_gap_fit)},
               {"energy_gap", fit_json(rep.energy_gap_fit)},
               {"gradient", fit_json(rep.gradient_fit)},
               {"sup_K", fit_json(rep.sup_K_fit)}};
  j["laplacian_ratio_grows"] = rep.laplacian_ratio_grows;
  j["decay_beta"] = rep.decay_beta;
  json crit = json::array();
  for (const auto& c : criteria) {
    crit.push_back({{"id", c.id},
                    {"description", c.description},
                    {"passed", c.passed},
                    {"acceptance", c.acceptance},
                    {"detail", c.detail}});
  }
  j["criteria"] = crit;
  return detail::dump(j);
}

void write_report_csv(std::ostream& out, const ConvergenceReport& rep) {
  out << "N,tau,e_tau,err_energy,mu_tau,err_mu,l2_err,l6_err,sup_K,sup_inner,max_outside\n";
  for (const auto& r : rep.rows) {
    const double cols[] = {r.N,      r.tau,    r.e_tau,  r.err_energy, r.mu_tau,     r.err_mu,
                           r.l2_err, r.l6_err, r.sup_K,  r.sup_inner,  r.max_outside};
    for (std::size_t i = 0; i < std::size(cols); ++i) out << (i ? "," : "") << format_number(cols[i]);
    out << '\n';
  }
}

void write_report_summary(std::ostream& out, const ConvergenceReport& rep,
                          const std::vector<CriterionResult>& criteria) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "d=%d p=%g C0=%g kappa=%d sigma=%g epsilon=%g mu_tf=%.10g e_tf=%.10g\n",
                rep.d, rep.p, rep.C0, rep.kappa, rep.sigma, rep.epsilon, rep.mu_tf, rep.e_tf);
  out << buf;
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf,
                  "  N=%-10.4g tau=%.4e e=%.10f mu=%.10f L2=%.3e L6=%.3e supK=%.3e beta=%.4g\n", r.N,
                  r.tau, r.e_tau, r.mu_tau, r.l2_err, r.l6_err, r.sup_K, r.decay_beta);
    out << buf;
  }
  for (const auto& c : criteria) {
    out << (c.passed ? "PASS " : "FAIL ") << (c.acceptance ? "" : "(info) ") << c.id << ": "
        << c.detail << '\n';
  }
}

}  // namespace cqtf
