#include "cqtf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "cqtf/errors.hpp"

namespace cqtf {

namespace {

constexpr double kExponentTol = 0.05;
constexpr double kLimitRelTol = 0.10;
constexpr double kSupWindow = 0.10;     // N^{d/(2d+p)} sup phi_N within 10% of u_tf(0)
constexpr double kBoundGrowth = 2.0;    // one-sided bound: ratio may grow at most 2x
constexpr double kRateTol = 0.10;
constexpr double kL6Ceiling = 5e-2;
constexpr double kMonotoneSlack = 0.05;
constexpr double kDecayFloor = 1e-290;

double layer_width(double tau, double p, double epsilon) {
  return std::pow(tau, 0.5 * p - epsilon) * std::pow(std::abs(std::log(tau)), -epsilon);
}

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1) for layer diagnostics");
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

}  // namespace

ScalingFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ArityError("fit_power_law: length mismatch");
  if (xs.size() < 3) throw ArityError("fit_power_law: need at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw DomainError("fit_power_law: inputs must be positive and finite");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_power_law: abscissas are degenerate");

  ScalingFit fit;
  fit.n_points = n;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ss_res += e * e;
  }
  fit.r_squared = (syy > 0.0) ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RegionErrors tf_comparison(const GroundState& state, const TFProfile& profile, double epsilon) {
  check_tau(state.tau);
  if (!(epsilon > 0.0)) throw DomainError("tf_comparison: epsilon must be positive");
  const auto& w = state.field_w;
  const double tau = state.tau;

  RegionErrors out;
  out.inner_radius = profile.radius - std::pow(tau * std::abs(std::log(tau)), epsilon);
  out.outer_radius = profile.radius + layer_width(tau, profile.p, epsilon);

  RadialField diff(w.grid);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double r = w.r(j);
    const double e = std::abs(w.values[j] - profile(r));
    diff.values[j] = e;
    if (r <= 0.5 * profile.radius) out.sup_K = std::max(out.sup_K, e);
    if (r < out.inner_radius) out.sup_inner = std::max(out.sup_inner, e);
    if (r >= out.outer_radius) out.max_outside = std::max(out.max_outside, std::abs(w.values[j]));
  }
  out.l2 = lq_norm(diff, 2.0);
  out.l6 = lq_norm(diff, 6.0);
  return out;
}

DecayCheck exterior_decay_check(const GroundState& state, const TFProfile& profile,
                                double epsilon, double c) {
  check_tau(state.tau);
  if (!(c > 0.0)) throw DomainError("exterior_decay_check: c must be positive");
  const auto& w = state.field_w;
  const auto& g = w.grid;
  const double tau = state.tau;
  const double layer = layer_width(tau, profile.p, epsilon);

  DecayCheck out;
  out.band_lo = profile.radius + layer;
  out.band_hi = std::min(profile.radius + 3.0 * layer, g.r_max() - 5.0 * g.h());

  std::vector<double> rs, logs;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double r = w.r(j);
    if (r < out.band_lo || r > out.band_hi) continue;
    if (!(w.values[j] > kDecayFloor)) continue;
    rs.push_back(r);
    logs.push_back(0.5 * (g.d() - 1) * std::log(r) + std::log(w.values[j]));
  }
  out.n_points = rs.size();
  if (rs.size() < 3) {
    out.passes = true;
    out.decay_beta = std::numeric_limits<double>::infinity();
    out.slope = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double mr = std::accumulate(rs.begin(), rs.end(), 0.0) / rs.size();
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    sxx += (rs[i] - mr) * (rs[i] - mr);
    sxy += (rs[i] - mr) * (logs[i] - ml);
  }
  out.slope = sxy / sxx;
  const double scale = std::pow(tau, -(profile.p + 4.0) / 4.0);
  out.decay_beta = -2.0 * out.slope / scale;
  out.passes = out.slope <= -c * scale;
  return out;
}

LaplacianCheck laplacian_bound_check(const GroundState& state, const TFProfile& profile) {
  const auto lap = apply_radial_laplacian(state.field_w);
  LaplacianCheck out;
  for (std::size_t j = 0; j < lap.size(); ++j) {
    if (lap.r(j) < profile.radius) out.sup_laplacian = std::max(out.sup_laplacian, std::abs(lap.values[j]));
  }
  out.bound_ratio = out.sup_laplacian * std::pow(state.tau, (3.0 * profile.p + 6.0) / 4.0);
  out.alt_ratio = out.sup_laplacian * std::pow(state.tau, (profile.p + 10.0) / 4.0);
  return out;
}

ConvergenceReport scaling_report(std::span<const GroundState> states, const TFProfile& profile,
                                 double sigma, double epsilon) {
  if (states.size() < 3) throw ArityError("scaling_report: need at least 3 states");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("scaling_report: sigma must lie in (0, 1]");
  if (epsilon <= 0.0) epsilon = 0.5 * sigma;

  std::vector<const GroundState*> order;
  for (const auto& s : states) {
    if (s.d() != profile.d || s.p != profile.p)
      throw DomainError("scaling_report: state and profile disagree on (d, p)");
    order.push_back(&s);
  }
  std::sort(order.begin(), order.end(),
            [](const GroundState* a, const GroundState* b) { return a->tau > b->tau; });

  ConvergenceReport rep;
  rep.d = profile.d;
  rep.p = profile.p;
  rep.C0 = profile.C0;
  rep.kappa = order.front()->kappa;
  rep.sigma = sigma;
  rep.epsilon = epsilon;
  rep.mu_tf = profile.mu_tf;
  rep.e_tf = tf_integrals(profile).tf_energy;

  const int d = profile.d;
  for (const GroundState* s : order) {
    const auto regions = tf_comparison(*s, profile, epsilon);
    const auto decay = exterior_decay_check(*s, profile, epsilon);
    const auto lap = laplacian_bound_check(*s, profile);
    ConvergenceRow row;
    row.N = s->N;
    row.tau = s->tau;
    row.e_tau = s->e_tau;
    row.err_energy = std::abs(s->e_tau - rep.e_tf);
    row.mu_tau = s->mu_tau;
    row.err_mu = std::abs(s->mu_tau - rep.mu_tf);
    row.l2_err = regions.l2;
    row.l6_err = regions.l6;
    row.sup_K = regions.sup_K;
    row.sup_inner = regions.sup_inner;
    row.max_outside = regions.max_outside;
    row.gradient_energy = gradient_norm_sq(s->field_w);
    row.laplacian_sup = lap.sup_laplacian;
    row.laplacian_ratio = lap.bound_ratio;
    row.laplacian_alt_ratio = lap.alt_ratio;
    row.energy_per_particle = s->energy_per_particle();
    row.sup_phi = std::pow(s->tau, 0.5 * d) * lq_norm(s->field_w, kInfinity);
    row.sextic_phi = std::pow(s->tau, 2.0 * d) * integrate(s->field_w, 6.0);
    row.potential_phi = 2.0 * s->energy_parts.potential / std::pow(s->tau, profile.p);
    row.decay_slope = decay.slope;
    row.decay_beta = decay.decay_beta;
    row.decay_passes = decay.passes;
    row.el_residual = s->el_residual;
    row.pohozaev_residual = s->pohozaev_residual;
    rep.rows.push_back(row);
  }

  auto column = [&](double ConvergenceRow::*m) {
    std::vector<double> v;
    for (const auto& r : rep.rows) v.push_back(r.*m);
    return v;
  };
  // Gaps can vanish to rounding for exact inputs; fits then report the floor.
  auto positive = [](std::vector<double> v) {
    for (double& x : v) x = std::max(x, std::numeric_limits<double>::min());
    return v;
  };
  const auto Ns = column(&ConvergenceRow::N);
  const auto taus = column(&ConvergenceRow::tau);
  rep.energy_fit = fit_power_law(Ns, column(&ConvergenceRow::energy_per_particle));
  rep.sup_fit = fit_power_law(Ns, column(&ConvergenceRow::sup_phi));
  rep.sextic_fit = fit_power_law(Ns, column(&ConvergenceRow::sextic_phi));
  rep.potential_fit = fit_power_law(Ns, positive(column(&ConvergenceRow::potential_phi)));
  rep.mu_gap_fit = fit_power_law(taus, positive(column(&ConvergenceRow::err_mu)));
  rep.energy_gap_fit = fit_power_law(taus, positive(column(&ConvergenceRow::err_energy)));
  rep.gradient_fit = fit_power_law(taus, positive(column(&ConvergenceRow::gradient_energy)));
  rep.sup_K_fit = fit_power_law(taus, positive(column(&ConvergenceRow::sup_K)));
  rep.laplacian_ratio_grows =
      rep.rows.back().laplacian_ratio > kBoundGrowth * rep.rows.front().laplacian_ratio;
  rep.decay_beta = rep.rows.back().decay_beta;
  return rep;
}

std::vector<CriterionResult> evaluate_criteria(const ConvergenceReport& rep) {
  if (rep.rows.size() < 3) throw ArityError("evaluate_criteria: need at least 3 rows");
  const auto& rows = rep.rows;
  const auto& last = rows.back();
  const double sigma = rep.sigma;
  const double eps = rep.epsilon;
  std::vector<CriterionResult> out;

  auto strictly_decreasing = [&](double ConvergenceRow::*m) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].*m < rows[i - 1].*m)) return false;
    return true;
  };
  auto non_increasing = [&](double ConvergenceRow::*m, double slack) {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].*m > (1.0 + slack) * rows[i - 1].*m) return false;
    return true;
  };
  // Largest ratio y / shape over the sweep against the ratio at the largest tau.
  auto bounded = [&](double ConvergenceRow::*m, auto shape) {
    const double first = rows.front().*m / shape(rows.front().tau);
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, (r.*m / shape(r.tau)) / first);
    return worst;
  };

  {
    const double target = rep.energy_target();
    const double scale = std::pow(last.N, target);
    const double ratio = last.energy_per_particle / scale;
    const bool ok_exp = std::abs(rep.energy_fit.exponent - target) <= kExponentTol;
    const bool ok_lim = std::abs(ratio - rep.e_tf) <= kLimitRelTol * rep.e_tf;
    out.push_back({"energy_scaling", "energy exponent and limit constant", ok_exp && ok_lim, true,
                   fmt("exponent %.6f (target %.6f); E/N^t at largest N %.6f", rep.energy_fit.exponent,
                       target, ratio) +
                       fmt(" vs %.6f", rep.e_tf)});
  }
  {
    const double target = rep.sup_target();
    const double center = std::pow(rep.mu_tf, 0.25);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : rows) {
      const double v = r.sup_phi * std::pow(r.N, -target);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool ok_exp = std::abs(rep.sup_fit.exponent - target) <= kExponentTol;
    const bool ok_win = lo >= (1.0 - kSupWindow) * center && hi <= (1.0 + kSupWindow) * center;
    out.push_back({"sup_vanishing", "sup-norm exponent and normalized sup window", ok_exp && ok_win,
                   true,
                   fmt("exponent %.6f (target %.6f); ", rep.sup_fit.exponent, target) +
                       fmt("normalized sup in [%.6f, %.6f], window center %.6f", lo, hi, center)});
  }
  {
    const double target = rep.sextic_target();
    out.push_back({"sextic_rate", "int phi^6 exponent",
                   std::abs(rep.sextic_fit.exponent - target) <= kExponentTol, true,
                   fmt("exponent %.6f (target %.6f)", rep.sextic_fit.exponent, target)});
  }
  {
    const bool mono = non_increasing(&ConvergenceRow::err_mu, 0.0);
    const double growth =
        bounded(&ConvergenceRow::err_mu, [&](double t) { return std::pow(t, sigma); });
    out.push_back({"multiplier_gap", "multiplier gap non-increasing and O(tau^sigma)",
                   mono && growth <= kBoundGrowth, true,
                   fmt("non-increasing %.0f; max ratio growth %.4f (limit %.1f)", mono ? 1.0 : 0.0,
                       growth, kBoundGrowth)});
  }
  {
    const bool dec = strictly_decreasing(&ConvergenceRow::l2_err) &&
                     strictly_decreasing(&ConvergenceRow::l6_err);
    out.push_back({"profile_convergence", "L2/L6 errors decreasing, L6 small at largest N",
                   dec && last.l6_err < kL6Ceiling, true,
                   fmt("decreasing %.0f; L6 at largest N %.3e (limit %.1e)", dec ? 1.0 : 0.0,
                       last.l6_err, kL6Ceiling)});
  }
  {
    const bool dec = strictly_decreasing(&ConvergenceRow::sup_K);
    const double growth_K =
        bounded(&ConvergenceRow::sup_K, [&](double t) { return std::pow(t, sigma); });
    const double growth_inner = bounded(&ConvergenceRow::sup_inner, [&](double t) {
      return std::pow(t, sigma - eps) * std::pow(std::abs(std::log(t)), -eps);
    });
    const bool ok = dec && growth_K <= kBoundGrowth && growth_inner <= kBoundGrowth;
    out.push_back({"corner_layer", "sup errors on K and on the inner ball within bound shapes", ok,
                   true,
                   fmt("K decreasing %.0f, K ratio growth %.4f, inner ratio growth %.4f",
                       dec ? 1.0 : 0.0, growth_K, growth_inner) +
                       fmt("; fitted K rate %.4f", rep.sup_K_fit.exponent)});
  }
  {
    bool all = true, grows = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      all = all && rows[i].decay_passes;
      if (i > 0 && !(std::abs(rows[i].decay_slope) > std::abs(rows[i - 1].decay_slope))) grows = false;
    }
    out.push_back({"exterior_decay", "exterior decay passes and rate grows as tau decreases",
                   all && grows, true,
                   fmt("all pass %.0f; rate increasing %.0f; beta at smallest tau %.4f",
                       all ? 1.0 : 0.0, grows ? 1.0 : 0.0, last.decay_beta)});
  }

  // Informational one-sided checks.
  out.push_back({"energy_gap_rate", "energy gap exponent >= sigma (one-sided)",
                 rep.energy_gap_fit.exponent >= sigma - kRateTol, false,
                 fmt("exponent %.4f (sigma %.4f)", rep.energy_gap_fit.exponent, sigma)});
  out.push_back({"multiplier_gap_rate", "multiplier gap exponent >= sigma (one-sided)",
                 rep.mu_gap_fit.exponent >= sigma - kRateTol, false,
                 fmt("exponent %.4f (sigma %.4f)", rep.mu_gap_fit.exponent, sigma)});
  out.push_back({"gradient_blowup", "gradient energy blows up no faster than tau^{sigma-p-2}",
                 rep.gradient_fit.exponent >= sigma - rep.p - 2.0 - kRateTol, false,
                 fmt("exponent %.4f (bound %.4f)", rep.gradient_fit.exponent, sigma - rep.p - 2.0)});
  out.push_back({"potential_energy", "int V phi^2 grows no faster than N^{2p/(2d+p)}",
                 rep.potential_fit.exponent <= rep.energy_target() + kExponentTol, false,
                 fmt("exponent %.4f (bound %.4f)", rep.potential_fit.exponent, rep.energy_target())});
  out.push_back({"laplacian_bound", "tau^{(3p+6)/4} sup|Lap w| not growing across the sweep",
                 !rep.laplacian_ratio_grows, false,
                 fmt("ratio first %.4e, last %.4e; (p+10)/4 ratio last %.4e", rows.front().laplacian_ratio,
                     last.laplacian_ratio, last.laplacian_alt_ratio)});
  out.push_back({"gap_monotone", "energy and multiplier gaps non-increasing within 5% slack",
                 non_increasing(&ConvergenceRow::err_energy, kMonotoneSlack) &&
                     non_increasing(&ConvergenceRow::err_mu, kMonotoneSlack),
                 false, ""});
  return out;
}

}  // namespace cqtf
