#include <cmath>
#include <numbers>

#include <doctest.h>

#include "cqtf/errors.hpp"
#include "cqtf/minimizer.hpp"
#include "cqtf/thomas_fermi.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace cqtf;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
const PotentialSpec harmonic = PotentialSpec::pure_power(1, 2);

const GroundState& reference_state() {
  static const GroundState s = solve_ground_state(reference_config(), harmonic, 1e4);
  return s;
}
}  // namespace

TEST_SUITE("minimizer") {
  TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.dt = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.kappa = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.grid.n = 32;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.tol_residual = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(init_kind_from_string("Random"), ConfigError);
    CHECK(init_kind_from_string("WarmStart") == InitKind::WarmStart);
  }

  TEST_CASE("tau and the automatic outer radius") {
    CHECK(tau_of(1e4, 1, 2) == Approx(0.01));
    CHECK(tau_of(8.0, 2, 2) == Approx(std::pow(8.0, -1.0 / 3.0)));
    CHECK_THROWS_AS(tau_of(0.0, 1, 2), DomainError);
    CHECK(default_r_max(harmonic, 1) == Approx(2 * std::sqrt(2 / pi) + 1));
  }

  TEST_CASE("energy breakdown examples") {
    const RadialGrid g(1, 4001, 3.0);
    const auto zero = energy_breakdown(RadialField(g), 0.1, harmonic, 1);
    CHECK(zero.total(1) == 0.0);

    const auto prof = tf_profile(1, 2, 1);
    const auto u = RadialField::sample(g, prof);
    const auto parts = energy_breakdown(u, 1e-6, harmonic, 1);
    CHECK(parts.potential == Approx(1 / (4 * pi)).epsilon(1e-4));
    CHECK(parts.quintic == Approx(1 / (4 * pi)).epsilon(1e-4));
    CHECK(parts.total(1) == Approx(1 / (2 * pi)).epsilon(1e-3));

    const auto w = RadialField::sample(g, [](double r) { return std::exp(-r * r); });
    const auto a = energy_breakdown(w, 0.3, harmonic, 1);
    const auto b = energy_breakdown(w, 0.3, harmonic, -1);
    CHECK(a.total(1) - b.total(-1) == Approx(2 * a.quartic));
  }

  TEST_CASE("reference solve at N = 1e4") {
    const auto& s = reference_state();
    CHECK(s.tau == Approx(0.01));
    CHECK(s.e_tau == Approx(1 / (2 * pi)).epsilon(0.1));
    CHECK(s.field_w.values[0] == Approx(std::pow(2 / pi, 0.25)).epsilon(0.1));
    CHECK(integrate(s.field_w, 2.0) == Approx(1.0).epsilon(1e-10));
    CHECK(s.el_residual <= 1e-6);
    CHECK(s.pohozaev_residual <= 1e-3);
    CHECK(s.stats.last_energy_change <= 1e-12);
    CHECK(s.field_w.values.back() == 0.0);
    const auto& p = s.energy_parts;
    CHECK(s.e_tau == Approx(p.kinetic + p.potential + p.quartic + p.quintic).epsilon(1e-15));
  }

  TEST_CASE("converged field is non-negative and non-increasing") {
    const auto& v = reference_state().field_w.values;
    for (std::size_t j = 0; j < v.size(); ++j) {
      CHECK(v[j] >= 0.0);
      if (j > 0) CHECK(v[j] <= v[j - 1]);
    }
  }

  TEST_CASE("multiplier formula and Rayleigh quotient agree") {
    const auto& s = reference_state();
    CHECK(lagrange_multiplier(s) == Approx(s.mu_tau).epsilon(1e-14));
    auto broken = s;
    broken.mu_tau = 0.0;
    broken.e_tau *= 1.01;
    CHECK_THROWS_AS(lagrange_multiplier(broken), ConsistencyError);
  }

  TEST_CASE("multiplier: formal limit and linearity in kappa") {
    const RadialGrid g(1, 40001, 1.0);
    const auto prof = tf_profile(1, 2, 1);
    auto s = make_state(RadialField::sample(g, prof), 1e-8, 2.0);
    s.energy_parts = energy_breakdown(s.field_w, s.tau, harmonic, 1);
    s.e_tau = s.energy_parts.total(1);
    s.tol_residual = 1.0;
    CHECK(lagrange_multiplier(s) == Approx(2 / pi).epsilon(1e-4));

    auto plus = make_state(RadialField::sample(g, [](double r) { return std::exp(-4 * r * r); }), 0.2, 2.0, 1);
    auto minus = plus;
    minus.kappa = -1;
    for (auto* st : {&plus, &minus}) {
      st->energy_parts = energy_breakdown(st->field_w, st->tau, harmonic, st->kappa);
      st->e_tau = st->energy_parts.total(st->kappa);
      st->tol_residual = 1e3;
    }
    // e itself carries kappa tau^{p/2}/4 int w^4, so the flip moves mu by twice tau^{p/2} int w^4.
    const double diff = lagrange_multiplier(plus) - lagrange_multiplier(minus);
    CHECK(diff == Approx(2.0 * std::pow(0.2, 1.0) * integrate(plus.field_w, 4.0)).epsilon(1e-12));
  }

  TEST_CASE("residual is at rounding level on an exact discrete eigenvector") {
    const double r_max = 3.0;
    const RadialGrid g(1, 257, r_max);
    const double k = pi / (2 * r_max);
    const auto w = RadialField::sample(g, [&](double r) { return std::cos(k * r); });
    const double a = 0.7;
    const double lambda = (2.0 - 2.0 * std::cos(k * g.h())) / (g.h() * g.h());
    const std::vector<double> V(g.size(), 0.0);
    // Rounding in the stencil is amplified by 1 / (h^2 lambda) ~ 1e4 here.
    CHECK(el_residual(w, a * lambda, a, V, 0.0, 0.0) < 1e-10);
    CHECK(el_residual(w, 1.1 * a * lambda, a, V, 0.0, 0.0) > 1e-3);
  }

  TEST_CASE("residual of the TF profile shrinks with tau") {
    const auto prof = tf_profile(1, 2, 1);
    const RadialGrid g(1, 4001, 2.0);
    double prev = 1e300;
    for (double tau : {0.1, 0.03, 0.01}) {
      auto s = make_state(RadialField::sample(g, prof), tau, 2.0);
      s.energy_parts = energy_breakdown(s.field_w, tau, harmonic, 1);
      s.e_tau = s.energy_parts.total(1);
      s.mu_tau = prof.mu_tf;
      const double r = residuals(s, harmonic).el_residual;
      CHECK(r > 0.0);
      CHECK(r < prev);
      prev = r;
    }
  }

  TEST_CASE("every accepted flow step keeps unit mass and does not raise the energy") {
    auto cfg = reference_config();
    cfg.grid.n = 512;
    std::size_t accepted = 0;
    double worst_mass = 0.0, worst_rise = 0.0;
    const auto s = solve_ground_state(cfg, harmonic, 1e3, nullptr, [&](const StepInfo& st) {
      if (!st.accepted) return;
      ++accepted;
      worst_mass = std::max(worst_mass, std::abs(st.mass - 1.0));
      worst_rise = std::max(worst_rise, st.energy - st.previous_energy);
    });
    CHECK(accepted == s.stats.accepted);
    CHECK(worst_mass <= 1e-10);
    CHECK(worst_rise <= cfg.backtrack_tolerance * std::abs(s.e_tau) * 1.01);
  }

  TEST_CASE("initializations reach the same fixed point") {
    auto cfg = reference_config();
    cfg.grid.n = 512;
    const auto a = solve_ground_state(cfg, harmonic, 1e3);
    cfg.init = InitKind::Gaussian;
    const auto b = solve_ground_state(cfg, harmonic, 1e3);
    CHECK(a.e_tau == Approx(b.e_tau).epsilon(1e-10));
    cfg.init = InitKind::WarmStart;
    const auto cold = solve_ground_state(cfg, harmonic, 1e3);
    CHECK(cold.iterations == a.iterations);
    const auto c = solve_ground_state(cfg, harmonic, 1e3, &b.field_w);
    CHECK(c.e_tau == Approx(a.e_tau).epsilon(1e-10));
    CHECK(c.iterations < a.iterations);
  }

  TEST_CASE("focusing cubic sign and higher dimensions converge") {
    auto cfg = reference_config();
    cfg.grid.n = 512;
    cfg.kappa = -1;
    const auto f = solve_ground_state(cfg, harmonic, 1e3);
    cfg.kappa = 1;
    const auto g = solve_ground_state(cfg, harmonic, 1e3);
    CHECK(f.e_tau < g.e_tau);
    CHECK(f.el_residual <= 1e-6);
    for (int d : {2, 3}) {
      cfg.grid.d = d;
      const auto s = solve_ground_state(cfg, harmonic, 1e3);
      CHECK(integrate(s.field_w, 2.0) == Approx(1.0).epsilon(1e-10));
      CHECK(s.el_residual <= 1e-6);
      CHECK(s.pohozaev_residual <= 1e-3);
      CHECK(s.e_tau == Approx(energy_limit_constant(d, 2, 1)).epsilon(0.1));
    }
  }

  TEST_CASE("magnetic trap ground state") {
    auto cfg = reference_config();
    cfg.grid.n = 512;
    const auto s = solve_ground_state(cfg, PotentialSpec::magnetic_trap(1, 1), 1e3);
    CHECK(s.el_residual <= 1e-6);
    CHECK(s.pohozaev_residual <= 1e-3);
  }

  TEST_CASE("iteration cap raises non-convergence with a partial state") {
    auto cfg = reference_config();
    cfg.max_iter = 5;
    try {
      (void)solve_ground_state(cfg, harmonic, 1e4);
      FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
      CHECK(e.partial().iterations == 5);
      CHECK(integrate(e.partial().field_w, 2.0) == Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("sweep returns decreasing tau and reports the failing index") {
    auto cfg = reference_config();
    cfg.grid.n = 256;
    const auto states = sweep(cfg, harmonic, {1e2, 1e3, 1e4}, 3);
    REQUIRE(states.size() == 3);
    for (std::size_t i = 0; i < states.size(); ++i) {
      CHECK(integrate(states[i].field_w, 2.0) == Approx(1.0).epsilon(1e-10));
      if (i > 0) CHECK(states[i].tau < states[i - 1].tau);
    }
    cfg.init = InitKind::WarmStart;
    const auto warm = sweep(cfg, harmonic, {1e2, 1e3, 1e4});
    for (std::size_t i = 0; i < 3; ++i) CHECK(warm[i].e_tau == Approx(states[i].e_tau).epsilon(1e-9));
    CHECK_THROWS_AS(sweep(cfg, harmonic, {1e3, 1e2}), DomainError);

    cfg.init = InitKind::SmoothedTF;
    cfg.max_iter = 200;
    try {
      (void)sweep(cfg, harmonic, {1.5, 1e4}, 2);
      FAIL("expected SweepError");
    } catch (const SweepError& e) {
      CHECK(e.index() == 1);
      CHECK(e.completed().size() == 1);
    }
  }

  TEST_CASE("rescaling to the original variables") {
    const auto& s = reference_state();
    const auto phi = rescale(s);
    CHECK(integrate(phi, 2.0) == Approx(1.0).epsilon(1e-10));
    CHECK(lq_norm(phi, kInfinity) == Approx(std::sqrt(s.tau) * lq_norm(s.field_w, kInfinity)));
    CHECK(s.energy_per_particle() == Approx(s.e_tau / (s.tau * s.tau)));
  }

  TEST_CASE("flow matches an independent projected-gradient minimization") {
    auto cfg = reference_config();
    cfg.grid.n = 64;
    const auto s = solve_ground_state(cfg, harmonic, 1e2);
    const oracle::Discrete1D P(64, s.field_w.grid.r_max(), s.tau, 2.0, 1.0, 1);
    const double best = oracle::projected_gradient_minimum(P, 5, 12345);
    CHECK(std::abs(s.e_tau - best) <= 1e-6);
  }
}
