#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cqtf/grid.hpp"
#include "cqtf/potentials.hpp"

namespace cqtf {

enum class InitKind { SmoothedTF, Gaussian, WarmStart };

std::string_view to_string(InitKind kind);
InitKind init_kind_from_string(std::string_view name);

struct GridParams {
  int d = 1;
  std::size_t n = 2048;
  /// <= 0 selects 2 (mu_tf / C0)^{1/p} + 1.
  double r_max = 0.0;
};

struct SolverConfig {
  int kappa = 1;  // +1 defocusing, -1 focusing cubic term
  double dt = 0.1;
  double tol_energy = 1e-12;    // relative energy change between accepted steps
  double tol_residual = 1e-6;   // relative Euler-Lagrange residual
  double tol_pohozaev = 1e-3;   // reported, not a stopping criterion
  std::size_t max_iter = 2'000'000;
  GridParams grid;
  InitKind init = InitKind::SmoothedTF;
  /// Floor inside the fourth root of the smoothed Thomas-Fermi start.
  double init_floor = 1e-3;
  /// An accepted step may raise the energy by at most this much, relative.
  double backtrack_tolerance = 1e-13;
  /// dt is halved on an energy increase; below dt / max_backtrack the flow
  /// is declared unstable.
  double max_backtrack = 1024.0;

  void validate() const;
};

/// The four terms of the rescaled energy
///   I(u) = tau^{p+2}/2 int|grad u|^2 + tau^p/2 int V(x/tau) u^2
///        + kappa tau^{p/2}/4 int u^4 + 1/6 int u^6.
/// `quartic` is stored without the sign kappa.
struct EnergyParts {
  double kinetic = 0.0;
  double potential = 0.0;
  double quartic = 0.0;
  double quintic = 0.0;

  double total(int kappa) const { return kinetic + potential + kappa * quartic + quintic; }
};

struct FlowStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_mass_error = 0.0;       // max |mass - 1| after an accepted step
  double max_energy_increase = 0.0;  // largest accepted I increase (>= 0)
  double final_dt = 0.0;
  double last_energy_change = 0.0;   // relative
};

struct GroundState {
  double N = 0.0;
  double tau = 0.0;  // N^{-2/(2d+p)}
  int kappa = 1;
  double p = 2.0;
  RadialField field_w;
  double mu_tau = 0.0;
  EnergyParts energy_parts;
  double e_tau = 0.0;
  std::size_t iterations = 0;
  double el_residual = 0.0;
  double pohozaev_residual = 0.0;
  double tol_residual = 1e-6;
  FlowStats stats;

  int d() const { return field_w.grid.d(); }
  /// Original-variable energy per particle, tau^{-p} e(tau).
  double energy_per_particle() const;
};

struct StepInfo {
  std::size_t iteration;
  bool accepted;
  double energy;
  double previous_energy;
  double mass;
  double dt;
  double residual;
};
using StepObserver = std::function<void(const StepInfo&)>;

class NonConvergenceError : public std::runtime_error {
public:
  NonConvergenceError(const std::string& what, GroundState partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const GroundState& partial() const { return partial_; }

private:
  GroundState partial_;
};

class InstabilityError : public std::runtime_error {
public:
  InstabilityError(const std::string& what, GroundState partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const GroundState& partial() const { return partial_; }

private:
  GroundState partial_;
};

class SweepError : public std::runtime_error {
public:
  SweepError(const std::string& what, std::size_t index, std::exception_ptr cause,
             std::vector<GroundState> completed)
      : std::runtime_error(what), index_(index), cause_(cause), completed_(std::move(completed)) {}
  std::size_t index() const { return index_; }
  std::exception_ptr cause() const { return cause_; }
  const std::vector<GroundState>& completed() const { return completed_; }

private:
  std::size_t index_;
  std::exception_ptr cause_;
  std::vector<GroundState> completed_;
};

double tau_of(double N, int d, double p);
double default_r_max(const PotentialSpec& spec, int d);
RadialGrid make_grid(const GridParams& params, const PotentialSpec& spec);

EnergyParts energy_breakdown(const RadialField& field, double tau, const PotentialSpec& spec,
                             int kappa);

/// Normalized gradient flow for e(tau) = inf I over unit-mass radial fields,
/// tau = N^{-2/(2d+p)}. Dirichlet value 0 is imposed at r_max.
GroundState solve_ground_state(const SolverConfig& config, const PotentialSpec& spec, double N,
                               const RadialField* warm_start = nullptr,
                               const StepObserver& observer = {});

/// 2 e + kappa tau^{p/2}/2 int w^4 + 2/3 int w^6, cross-checked against the
/// Rayleigh quotient <H w, w> built from the central-difference Laplacian.
/// ConsistencyError if they differ by more than 10 tol_residual (relative).
double lagrange_multiplier(const GroundState& state);

struct Residuals {
  double el_residual = 0.0;
  double pohozaev_residual = 0.0;
};

Residuals residuals(const GroundState& state, const PotentialSpec& spec);

/// Relative weighted-L2 residual of
///   -a Lap w + V w + b w^3 + c w^5 - mu w
/// with `potential` sampled at the nodes. The Dirichlet node at r_max and
/// zero-weight nodes are excluded.
double el_residual(const RadialField& w, double mu, double a, std::span<const double> potential,
                   double b, double c);

/// One ground state per N. With InitKind::WarmStart each solve starts from the
/// previous rescaled field and the sweep runs serially; otherwise up to
/// `workers` solves run concurrently.
std::vector<GroundState> sweep(const SolverConfig& config, const PotentialSpec& spec,
                               const std::vector<double>& Ns, unsigned workers = 1);

/// phi_N(r) = tau^{d/2} w(tau r) on the grid r_j / tau.
RadialField rescale(const GroundState& state);

}  // namespace cqtf
