#include "cqtf/special_functions.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cqtf/errors.hpp"

namespace cqtf {

namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

double lanczos_log_gamma(double x) {
  // x >= 1/2
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

constexpr double kBetaCheckTolerance = 1e-10;

}  // namespace

LogGamma log_gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
  if (is_pole(x)) throw DomainError("log_gamma: pole at x = " + std::to_string(x));
  if (x >= 0.5) return {lanczos_log_gamma(x), 1};
  // Gamma(x) Gamma(1-x) = pi / sin(pi x), and Gamma(1-x) > 0 here.
  const double s = std::sin(std::numbers::pi * x);
  return {std::log(std::numbers::pi / std::abs(s)) - lanczos_log_gamma(1.0 - x), s > 0 ? 1 : -1};
}

double gamma_fn(double x) {
  const auto lg = log_gamma(x);
  return lg.sign * std::exp(lg.value);
}

double beta_quadrature(double P, double Q) {
  if (!(P > 0.0) || !(Q > 0.0)) throw DomainError("beta_quadrature: needs P, Q > 0");
  boost::math::quadrature::tanh_sinh<double> integrator;
  // tanh_sinh passes xc = -x on the left half and xc = 1 - x on the right half.
  auto f = [P, Q](double x, double xc) {
    const double right = xc >= 0.0 ? xc : 1.0 - x;
    if (x <= 0.0 || right <= 0.0) return 0.0;
    return std::pow(x, P - 1.0) * std::pow(right, Q - 1.0);
  };
  return integrator.integrate(f, 0.0, 1.0, 1e-14);
}

double beta_fn(double P, double Q) {
  if (!(P > 0.0)) throw DomainError("beta_fn: P must be positive");
  if (is_pole(Q)) throw DomainError("beta_fn: Gamma(Q) has a pole");
  if (is_pole(P + Q)) throw DomainError("beta_fn: Gamma(P+Q) has a pole");

  const auto a = log_gamma(P);
  const auto b = log_gamma(Q);
  const auto c = log_gamma(P + Q);
  const double value = a.sign * b.sign * c.sign * std::exp(a.value + b.value - c.value);

  if (Q > 0.0) {
    static std::mutex mutex;
    static std::map<std::pair<double, double>, double> checked;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(P, Q);
    if (!checked.contains(key)) {
      const double quad = beta_quadrature(P, Q);
      if (std::abs(quad - value) > kBetaCheckTolerance * std::abs(value))
        throw ConsistencyError("beta_fn(" + std::to_string(P) + ", " + std::to_string(Q) +
                               "): closed form and quadrature disagree");
      checked.emplace(key, quad);
    }
  }
  return value;
}

}  // namespace cqtf
