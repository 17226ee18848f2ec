#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "cqtf/errors.hpp"
#include "cqtf/potentials.hpp"
#include "oracles.hpp"

using namespace cqtf;
using doctest::Approx;

namespace {
std::vector<double> samples_up_to(double r_max, std::size_t n) {
  std::vector<double> r;
  for (std::size_t i = 0; i < n; ++i) r.push_back(r_max * i / (n - 1));
  return r;
}
}  // namespace

TEST_SUITE("potentials") {
  TEST_CASE("eval examples") {
    CHECK(eval(PotentialSpec::pure_power(1, 2), 2.0) == 4.0);
    CHECK(eval(PotentialSpec::magnetic_trap(1, 1), 0.0) == 1.0);
    const auto poly = PotentialSpec::polynomial_sum({{1, 2}, {0.5, 4}}, {1, 4, 2, 2, 0});
    CHECK(eval(poly, 1.0) == Approx(1.5));
  }

  TEST_CASE("radial virial examples") {
    CHECK(radial_virial(PotentialSpec::pure_power(1, 2), 3.0).value == Approx(18.0));
    CHECK(radial_virial(PotentialSpec::pure_power(2, 4), 1.0).value == Approx(8.0));
    const auto trap = PotentialSpec::magnetic_trap(1, 1);
    const double expected = 2.0 - 2.0 * std::exp(-1.0);
    CHECK(radial_virial(trap, 1.0).value == Approx(expected).epsilon(1e-12));
    const double fd = oracle::central_difference([&](double r) { return eval(trap, r); }, 1.0);
    CHECK(radial_virial(trap, 1.0).value == Approx(fd).epsilon(1e-8));
  }

  TEST_CASE("negative radius and out-of-table queries") {
    const auto spec = PotentialSpec::pure_power(1, 2);
    CHECK_THROWS_AS(eval(spec, -0.1), DomainError);
    CHECK_THROWS_AS(radial_virial(spec, -1.0), DomainError);
    const auto tab = PotentialSpec::tabulated({0, 1, 2, 3}, {0, 1, 4, 9}, {});
    CHECK_THROWS_AS(eval(tab, 3.5), ExtrapolationError);
    CHECK_THROWS_AS(radial_virial(tab, 3.5), ExtrapolationError);
  }

  TEST_CASE("inadmissible parameters are rejected") {
    CHECK_THROWS_AS(PotentialSpec::pure_power(0.0, 2), DomainError);
    CHECK_THROWS_AS(PotentialSpec::pure_power(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(PotentialSpec::polynomial_sum({{1, 2}}, {1, 2, 2, 0, 0}), DomainError);
    CHECK_THROWS_AS(PotentialSpec::polynomial_sum({{-1, 2}}, {}), DomainError);
    CHECK_THROWS_AS(PotentialSpec::magnetic_trap(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(PotentialSpec::magnetic_trap(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0, 1, 2, 3}, {0, 2, 1, 3}, {}), DomainError);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0, 1, 2}, {0, 1, 2}, {}), DomainError);
    CHECK_THROWS_AS(PotentialSpec::tabulated({0.5, 1, 2, 3}, {0, 1, 2, 3}, {}), DomainError);
  }

  TEST_CASE("tabulated potential interpolates monotonically and flags the end derivative") {
    std::vector<double> r, v;
    for (int i = 0; i <= 20; ++i) {
      r.push_back(0.5 * i);
      v.push_back(r.back() * r.back());
    }
    const auto tab = PotentialSpec::tabulated(r, v, {1, 2, 0, 0, 0});
    CHECK(eval(tab, 2.0) == Approx(4.0));
    double prev = -1.0;
    for (double x = 0.0; x <= 10.0; x += 0.01) {
      const double y = eval(tab, x);
      CHECK(y >= prev);
      prev = y;
    }
    const auto inner = radial_virial(tab, 4.0);
    CHECK_FALSE(inner.numeric_fallback);
    CHECK(inner.value == Approx(32.0).epsilon(0.05));
    const auto edge = radial_virial(tab, 10.0);
    CHECK(edge.numeric_fallback);
    CHECK(edge.value > 0.0);
  }

  TEST_CASE("tail conditions: pure power") {
    const auto spec = PotentialSpec::pure_power(1, 2);
    const auto rep = verify_tail_conditions(spec, samples_up_to(1e3, 200));
    CHECK(rep.passes());
    CHECK(rep.virial_ratio.observed == Approx(1.0));
    CHECK(rep.virial_subleading.observed == 0.0);
    CHECK(rep.value_subleading.observed == 0.0);
  }

  TEST_CASE("tail conditions: magnetic trap with bounded subleading term") {
    const auto rep = verify_tail_conditions(PotentialSpec::magnetic_trap(1, 1), samples_up_to(100, 400));
    CHECK(rep.passes());
    CHECK(std::abs(rep.value_subleading.observed) < 1e-12);
  }

  TEST_CASE("tail conditions: polynomial sum with declared subleading constants") {
    const auto spec = PotentialSpec::polynomial_sum({{1, 2}, {1, 4}}, {1, 4, 2, 2, 1});
    const auto rep = verify_tail_conditions(spec, samples_up_to(1e3, 100));
    CHECK(rep.passes());
    CHECK(rep.value_subleading.observed == Approx(1.0));
    CHECK(rep.virial_subleading.observed == Approx(2.0));
  }

  TEST_CASE("tail conditions catch a wrong declaration") {
    const auto spec = PotentialSpec::polynomial_sum({{1, 2}, {1, 4}}, {1, 4, 2, 0, 0});
    const auto rep = verify_tail_conditions(spec, samples_up_to(1e3, 100));
    CHECK_FALSE(rep.passes());
    CHECK_THROWS_AS(verify_tail_conditions(spec, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(verify_tail_conditions(spec, std::vector<double>{1, 1}), DomainError);
  }

  TEST_CASE("rescaled trap equals tau^p V(r / tau)") {
    const auto trap = PotentialSpec::magnetic_trap(0.5, 1.0);
    const double tau = 0.1;
    CHECK(rescaled_eval(trap, tau, 0.3) == Approx(tau * tau * eval(trap, 3.0)));
    CHECK(rescaled_virial(trap, tau, 0.3) == Approx(tau * tau * radial_virial(trap, 3.0).value));
    const auto pp = PotentialSpec::pure_power(2.0, 3.0);
    CHECK(rescaled_eval(pp, 1e-3, 0.7) == Approx(2.0 * std::pow(0.7, 3.0)));
  }

  TEST_CASE("property: admissible specs are non-negative, non-decreasing, Euler-homogeneous") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(0.1, 5.0), pw(2.0, 6.0), ab(0.05, 1.0);
    const auto r = samples_up_to(50.0, 500);
    for (int k = 0; k < 30; ++k) {
      const double p = pw(rng);
      const auto pure = PotentialSpec::pure_power(c(rng), p);
      const double a = ab(rng);
      const auto trap = PotentialSpec::magnetic_trap(a, ab(rng) / a);
      const auto poly = PotentialSpec::polynomial_sum({{c(rng), 2.0}, {c(rng), p}}, {1, p, 2, 0, 0});
      for (const auto* spec : {&pure, &trap, &poly}) {
        double prev = -1.0;
        for (double x : r) {
          const double v = eval(*spec, x);
          CHECK(v >= 0.0);
          CHECK(v >= prev);
          prev = v;
        }
      }
      for (double x : {0.0, 0.3, 2.0, 17.0}) {
        CHECK(radial_virial(pure, x).value == Approx(p * eval(pure, x)).epsilon(1e-14));
      }
      CHECK(verify_tail_conditions(pure, r).passes());
    }
  }

  TEST_CASE("kind names round-trip") {
    for (auto k : {PotentialKind::PurePower, PotentialKind::PolynomialSum, PotentialKind::MagneticTrap,
                   PotentialKind::Tabulated})
      CHECK(potential_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(potential_kind_from_string("Harmonic"), DomainError);
  }
}
