#include "cqtf/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "cqtf/errors.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace cqtf {

std::string_view to_string(InitKind kind) {
  switch (kind) {
    case InitKind::SmoothedTF: return "SmoothedTF";
    case InitKind::Gaussian: return "Gaussian";
    case InitKind::WarmStart: return "WarmStart";
  }
  return "?";
}

InitKind init_kind_from_string(std::string_view name) {
  for (auto k : {InitKind::SmoothedTF, InitKind::Gaussian, InitKind::WarmStart})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown init kind '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (kappa != 1 && kappa != -1) throw ConfigError("kappa must be +1 or -1");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(tol_energy > 0.0) || !(tol_residual > 0.0) || !(tol_pohozaev > 0.0))
    throw ConfigError("tolerances must be positive");
  if (max_iter == 0) throw ConfigError("max_iter must be positive");
  if (grid.d < 1 || grid.d > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (grid.n < RadialGrid::kMinNodes) throw ConfigError("grid needs at least 64 nodes");
  if (!(init_floor > 0.0)) throw ConfigError("init_floor must be positive");
  if (!(max_backtrack >= 1.0)) throw ConfigError("max_backtrack must be >= 1");
}

double GroundState::energy_per_particle() const { return e_tau / std::pow(tau, p); }

double tau_of(double N, int d, double p) {
  if (!(N > 0.0)) throw DomainError("N must be positive");
  return std::pow(N, -2.0 / (2.0 * d + p));
}

double default_r_max(const PotentialSpec& spec, int d) {
  return 2.0 * tf_profile(d, spec.p(), spec.C0()).radius + 1.0;
}

RadialGrid make_grid(const GridParams& params, const PotentialSpec& spec) {
  const double r_max = params.r_max > 0.0 ? params.r_max : default_r_max(spec, params.d);
  return RadialGrid(params.d, params.n, r_max);
}

namespace {

constexpr double kUnderflowFloor = 1e-290;

std::vector<double> sample_potential(const RadialGrid& g, const PotentialSpec& spec, double tau) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = rescaled_eval(spec, tau, g.node(j));
  return v;
}

// Discrete rescaled energy on a fixed grid. Node n-1 is held at zero by the
// flow; the energy itself is evaluated on every node.
class DiscreteEnergy {
public:
  DiscreteEnergy(const RadialGrid& grid, std::vector<double> potential, double tau, double p,
                 int kappa)
      : grid_(grid),
        potential_(std::move(potential)),
        kinetic_coeff_(std::pow(tau, p + 2.0)),
        quartic_coeff_(std::pow(tau, 0.5 * p)),
        kappa_(kappa) {}

  const RadialGrid& grid() const { return grid_; }
  double kinetic_coeff() const { return kinetic_coeff_; }
  double cubic_coeff() const { return kappa_ * quartic_coeff_; }
  std::span<const double> potential() const { return potential_; }

  EnergyParts parts(std::span<const double> u) const {
    EnergyParts e;
    double s2v = 0.0, s4 = 0.0, s6 = 0.0, grad = 0.0;
    const std::size_t n = grid_.size();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = grid_.weight(j);
      const double u2 = u[j] * u[j];
      s2v += w * potential_[j] * u2;
      s4 += w * u2 * u2;
      s6 += w * u2 * u2 * u2;
      if (j + 1 < n) {
        const double du = u[j + 1] - u[j];
        grad += grid_.edge_factor(j) * du * du;
      }
    }
    e.kinetic = 0.5 * kinetic_coeff_ * grid_.omega() * grad / grid_.h();
    e.potential = 0.5 * s2v;
    e.quartic = 0.25 * quartic_coeff_ * s4;
    e.quintic = s6 / 6.0;
    return e;
  }

  double energy(std::span<const double> u) const { return parts(u).total(kappa_); }

  // Euclidean gradient of the energy w.r.t. the free nodes 0..n-2.
  void gradient(std::span<const double> u, std::span<double> g) const {
    const std::size_t m = grid_.size() - 1;
    const double k = kinetic_coeff_ * grid_.omega() / grid_.h();
    const double b = cubic_coeff();
    for (std::size_t j = 0; j < m; ++j) {
      double lap = grid_.edge_factor(j) * (u[j] - u[j + 1]);
      if (j > 0) lap += grid_.edge_factor(j - 1) * (u[j] - u[j - 1]);
      const double u2 = u[j] * u[j];
      g[j] = k * lap + grid_.weight(j) * (potential_[j] + b * u2 + u2 * u2) * u[j];
    }
  }

private:
  RadialGrid grid_;
  std::vector<double> potential_;
  double kinetic_coeff_;
  double quartic_coeff_;
  int kappa_;
};

// LU factors of the SPD tridiagonal M + dt a K on the free nodes.
class ImplicitKinetic {
public:
  ImplicitKinetic(const RadialGrid& g, double kinetic_coeff, double dt) : dt_(dt) {
    const std::size_t m = g.size() - 1;
    const double k = dt * kinetic_coeff * g.omega() / g.h();
    lower_.resize(m, 0.0);
    upper_.resize(m, 0.0);
    pivot_.resize(m);
    std::vector<double> diag(m);
    for (std::size_t j = 0; j < m; ++j) {
      diag[j] = g.weight(j) + k * (g.edge_factor(j) + (j > 0 ? g.edge_factor(j - 1) : 0.0));
      if (j + 1 < m) upper_[j] = -k * g.edge_factor(j);
      if (j > 0) lower_[j] = -k * g.edge_factor(j - 1);
    }
    pivot_[0] = diag[0];
    for (std::size_t j = 1; j < m; ++j)
      pivot_[j] = diag[j] - lower_[j] * upper_[j - 1] / pivot_[j - 1];
  }

  double dt() const { return dt_; }

  void solve(std::span<const double> rhs, std::span<double> x) const {
    const std::size_t m = pivot_.size();
    x[0] = rhs[0];
    for (std::size_t j = 1; j < m; ++j) x[j] = rhs[j] - lower_[j] / pivot_[j - 1] * x[j - 1];
    x[m - 1] /= pivot_[m - 1];
    for (std::size_t j = m - 1; j-- > 0;) x[j] = (x[j] - upper_[j] * x[j + 1]) / pivot_[j];
  }

private:
  double dt_;
  std::vector<double> lower_, upper_, pivot_;
};

double mass_of(const RadialGrid& g, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g.weight(j) * u[j] * u[j];
  return s;
}

void normalize(const RadialGrid& g, std::span<double> u) {
  const double scale = 1.0 / std::sqrt(mass_of(g, u));
  for (double& v : u) v *= scale;
}

std::vector<double> initial_field(const SolverConfig& cfg, const PotentialSpec& spec,
                                  const RadialGrid& g, const RadialField* warm) {
  std::vector<double> u(g.size());
  const auto tf = tf_profile(g.d(), spec.p(), spec.C0());
  InitKind kind = cfg.init;
  if (kind == InitKind::WarmStart && warm == nullptr) kind = InitKind::SmoothedTF;

  switch (kind) {
    case InitKind::SmoothedTF:
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double v = tf.mu_tf - tf.C0 * std::pow(g.node(j), tf.p);
        u[j] = std::pow(std::max(v, cfg.init_floor), 0.25);
      }
      break;
    case InitKind::Gaussian: {
      const double s = 0.5 * tf.radius;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = g.node(j) / s;
        u[j] = std::exp(-0.5 * r * r);
      }
      break;
    }
    case InitKind::WarmStart: {
      const auto& wg = warm->grid;
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j) / wg.h();
        const auto i = static_cast<std::size_t>(x);
        if (i + 1 >= wg.size()) {
          u[j] = 0.0;
          continue;
        }
        const double t = x - static_cast<double>(i);
        u[j] = std::max(0.0, (1.0 - t) * warm->values[i] + t * warm->values[i + 1]);
      }
      break;
    }
  }
  u.back() = 0.0;
  normalize(g, u);
  return u;
}

// Relative EL residual from the constrained gradient r = g - mu W u.
double flow_residual(const RadialGrid& g, std::span<const double> r, double mu) {
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j) {
    const double w = g.weight(j);
    if (w > 0.0) s += r[j] * r[j] / w;
  }
  return std::sqrt(s) / std::abs(mu);
}

GroundState finish_state(const SolverConfig& cfg, const PotentialSpec& spec, double N,
                         double tau, const RadialGrid& g, std::vector<double> u,
                         std::size_t iterations, const FlowStats& stats) {
  GroundState s{.N = N,
                .tau = tau,
                .kappa = cfg.kappa,
                .p = spec.p(),
                .field_w = RadialField(g, std::move(u)),
                .mu_tau = 0.0,
                .energy_parts = {},
                .e_tau = 0.0,
                .iterations = iterations,
                .el_residual = 0.0,
                .pohozaev_residual = 0.0,
                .tol_residual = cfg.tol_residual,
                .stats = stats};
  s.energy_parts = energy_breakdown(s.field_w, tau, spec, cfg.kappa);
  s.e_tau = s.energy_parts.total(cfg.kappa);
  const double quartic_int = 4.0 * s.energy_parts.quartic / std::pow(tau, 0.5 * spec.p());
  s.mu_tau = 2.0 * s.e_tau + 0.5 * cfg.kappa * std::pow(tau, 0.5 * spec.p()) * quartic_int +
             4.0 * s.energy_parts.quintic;
  const auto res = residuals(s, spec);
  s.el_residual = res.el_residual;
  s.pohozaev_residual = res.pohozaev_residual;
  return s;
}

}  // namespace

EnergyParts energy_breakdown(const RadialField& field, double tau, const PotentialSpec& spec,
                             int kappa) {
  const DiscreteEnergy energy(field.grid, sample_potential(field.grid, spec, tau), tau, spec.p(),
                              kappa);
  return energy.parts(field.values);
}

GroundState solve_ground_state(const SolverConfig& cfg, const PotentialSpec& spec, double N,
                               const RadialField* warm, const StepObserver& observer) {
  cfg.validate();
  const double tau = tau_of(N, cfg.grid.d, spec.p());
  const RadialGrid grid = make_grid(cfg.grid, spec);
  const DiscreteEnergy energy(grid, sample_potential(grid, spec, tau), tau, spec.p(), cfg.kappa);
  const std::size_t m = grid.size() - 1;

  std::vector<double> u = initial_field(cfg, spec, grid, warm);
  std::vector<double> trial(grid.size(), 0.0), grad(m), step(m);
  double e_old = energy.energy(u);

  const double dt_floor = cfg.dt / cfg.max_backtrack;
  ImplicitKinetic implicit(grid, energy.kinetic_coeff(), cfg.dt);
  FlowStats stats;
  std::size_t streak = 0;

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    energy.gradient(u, grad);
    double mu = 0.0;
    for (std::size_t j = 0; j < m; ++j) mu += grad[j] * u[j];
    for (std::size_t j = 0; j < m; ++j) grad[j] -= mu * grid.weight(j) * u[j];
    const double residual = flow_residual(grid, grad, mu);

    implicit.solve(grad, step);
    const double dt = implicit.dt();
    for (std::size_t j = 0; j < m; ++j) {
      trial[j] = u[j] - dt * step[j];
      // Exterior tails otherwise drift into subnormals, which are very slow.
      if (std::abs(trial[j]) < kUnderflowFloor) trial[j] = 0.0;
    }
    trial[m] = 0.0;
    normalize(grid, trial);
    const double e_new = energy.energy(trial);
    const double mass = mass_of(grid, trial);

    const double allowed = cfg.backtrack_tolerance * std::max(1.0, std::abs(e_old));
    const bool accepted = e_new <= e_old + allowed;
    if (observer) observer({it, accepted, e_new, e_old, mass, dt, residual});

    if (!accepted) {
      ++stats.rejected;
      streak = 0;
      const double smaller = 0.5 * dt;
      if (smaller < dt_floor) {
        stats.final_dt = dt;
        throw InstabilityError(
            "energy increased at dt = " + std::to_string(dt) + " after backtracking (N = " +
                std::to_string(N) + ")",
            finish_state(cfg, spec, N, tau, grid, u, it, stats));
      }
      implicit = ImplicitKinetic(grid, energy.kinetic_coeff(), smaller);
      continue;
    }

    ++stats.accepted;
    stats.max_mass_error = std::max(stats.max_mass_error, std::abs(mass - 1.0));
    stats.max_energy_increase = std::max(stats.max_energy_increase, e_new - e_old);
    stats.last_energy_change = std::abs(e_new - e_old) / std::max(std::abs(e_new), 1e-300);
    stats.final_dt = dt;
    u.swap(trial);
    e_old = e_new;

    if (stats.last_energy_change <= cfg.tol_energy && residual <= cfg.tol_residual)
      return finish_state(cfg, spec, N, tau, grid, std::move(u), it, stats);

    if (dt < cfg.dt && ++streak >= 16) {
      implicit = ImplicitKinetic(grid, energy.kinetic_coeff(), std::min(cfg.dt, 2.0 * dt));
      streak = 0;
    }
  }

  throw NonConvergenceError("normalized gradient flow did not converge in " +
                                std::to_string(cfg.max_iter) + " iterations (N = " +
                                std::to_string(N) + ")",
                            finish_state(cfg, spec, N, tau, grid, std::move(u), cfg.max_iter,
                                         stats));
}

double el_residual(const RadialField& w, double mu, double a, std::span<const double> potential,
                   double b, double c) {
  const auto lap = apply_radial_laplacian(w);
  const auto& g = w.grid;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j) {
    const double wt = g.weight(j);
    if (wt == 0.0) continue;
    const double u = w.values[j];
    const double u2 = u * u;
    const double r = -a * lap.values[j] + (potential[j] + b * u2 + c * u2 * u2 - mu) * u;
    num += wt * r * r;
    den += wt * mu * mu * u2;
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Residuals residuals(const GroundState& s, const PotentialSpec& spec) {
  const auto& w = s.field_w;
  const auto& g = w.grid;
  const double p = spec.p();
  const double tau = s.tau;
  const auto potential = sample_potential(g, spec, tau);

  Residuals out;
  out.el_residual = el_residual(w, s.mu_tau, std::pow(tau, p + 2.0), potential,
                                s.kappa * std::pow(tau, 0.5 * p), 1.0);

  // tau^{p+2} int|grad w|^2 + kappa tau^{p/2} d/4 int w^4
  //   = tau^{p-1}/2 int (grad V(x/tau).x) w^2 - d/3 int w^6
  const int d = g.d();
  double virial = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    virial += g.weight(j) * rescaled_virial(spec, tau, g.node(j)) * w.values[j] * w.values[j];
  const double t_kin = 2.0 * s.energy_parts.kinetic;
  const double t_cubic = s.kappa * d * s.energy_parts.quartic;
  const double t_vir = 0.5 * virial;
  const double t_six = d / 3.0 * 6.0 * s.energy_parts.quintic;
  const double scale =
      std::max({std::abs(t_kin), std::abs(t_cubic), std::abs(t_vir), std::abs(t_six)});
  out.pohozaev_residual = scale > 0.0 ? std::abs(t_kin + t_cubic - t_vir + t_six) / scale : 0.0;
  return out;
}

double lagrange_multiplier(const GroundState& s) {
  const auto& w = s.field_w;
  const auto& g = w.grid;
  const double half_p = 0.5 * s.p;
  const double s4 = 4.0 * s.energy_parts.quartic / std::pow(s.tau, half_p);
  const double s6 = 6.0 * s.energy_parts.quintic;
  const double mu = 2.0 * s.e_tau + 0.5 * s.kappa * std::pow(s.tau, half_p) * s4 + 2.0 / 3.0 * s6;

  // <H w, w> with the kinetic part from the central-difference Laplacian
  const auto lap = apply_radial_laplacian(w);
  double kin = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j)
    kin -= g.weight(j) * w.values[j] * lap.values[j];
  const double rayleigh = std::pow(s.tau, s.p + 2.0) * kin + 2.0 * s.energy_parts.potential +
                          s.kappa * std::pow(s.tau, half_p) * s4 + s6;

  if (std::abs(mu - rayleigh) > 10.0 * s.tol_residual * std::max(std::abs(mu), 1e-300))
    throw ConsistencyError("multiplier identity " + std::to_string(mu) +
                           " disagrees with Rayleigh quotient " + std::to_string(rayleigh));
  return mu;
}

std::vector<GroundState> sweep(const SolverConfig& cfg, const PotentialSpec& spec,
                               const std::vector<double>& Ns, unsigned workers) {
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (!(Ns[i] > 0.0)) throw DomainError("sweep: every N must be positive");
    if (i > 0 && !(Ns[i] > Ns[i - 1])) throw DomainError("sweep: Ns must be increasing");
  }

  std::vector<GroundState> out;
  out.reserve(Ns.size());
  auto fail = [&](std::size_t i) {
    throw SweepError("sweep failed at index " + std::to_string(i) + " (N = " +
                         std::to_string(Ns[i]) + ")",
                     i, std::current_exception(), out);
  };

  if (cfg.init == InitKind::WarmStart || workers <= 1) {
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      const RadialField* warm =
          (cfg.init == InitKind::WarmStart && !out.empty()) ? &out.back().field_w : nullptr;
      try {
        out.push_back(solve_ground_state(cfg, spec, Ns[i], warm));
      } catch (...) {
        fail(i);
      }
    }
    return out;
  }

  for (std::size_t start = 0; start < Ns.size(); start += workers) {
    const std::size_t stop = std::min(Ns.size(), start + workers);
    std::vector<std::future<GroundState>> jobs;
    for (std::size_t i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async,
                                [&, i] { return solve_ground_state(cfg, spec, Ns[i]); }));
    for (std::size_t i = start; i < stop; ++i) {
      try {
        out.push_back(jobs[i - start].get());
      } catch (...) {
        for (std::size_t k = i + 1; k < stop; ++k) jobs[k - start].wait();
        fail(i);
      }
    }
  }
  return out;
}

RadialField rescale(const GroundState& s) {
  const auto& g = s.field_w.grid;
  const RadialGrid original(g.d(), g.size(), g.r_max() / s.tau);
  const double scale = std::pow(s.tau, 0.5 * g.d());
  std::vector<double> v(s.field_w.values);
  for (double& x : v) x *= scale;
  return {original, std::move(v)};
}

}  // namespace cqtf
