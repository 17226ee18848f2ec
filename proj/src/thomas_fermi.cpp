#include "cqtf/thomas_fermi.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "cqtf/errors.hpp"
#include "cqtf/special_functions.hpp"

namespace cqtf {

namespace {

void check_params(int d, double p, double C0) {
  if (d < 1 || d > 3) throw DomainError("dimension must be 1, 2 or 3");
  if (!(p >= 2.0)) throw DomainError("trap power p must be >= 2");
  if (!(C0 > 0.0)) throw DomainError("C0 must be positive");
}

// int_0^R r^{d-1+k} (mu - C0 r^p)^s dr
//   = C0^{-(d+k)/p} mu^{(d+k)/p + s} B((d+k)/p, s+1) / p
double radial_moment(const TFProfile& tf, double k, double s) {
  const double a = (tf.d + k) / tf.p;
  return std::pow(tf.C0, -a) * std::pow(tf.mu_tf, a + s) * beta_fn(a, s + 1.0) / tf.p;
}

double radial_moment_quadrature(const TFProfile& tf, double k, double s) {
  // r = R t, mu - C0 r^p = mu (1 - t^p)
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double p = tf.p;
  const double e = tf.d - 1 + k;
  // xc as in beta_quadrature: -t on the left half, 1 - t on the right half.
  auto f = [p, e, s](double t, double tc) {
    const double right = tc >= 0.0 ? tc : 1.0 - t;
    if (t <= 0.0 || right <= 0.0) return 0.0;
    const double one_minus_tp = -std::expm1(p * std::log1p(-right));
    return std::pow(t, e) * std::pow(one_minus_tp, s);
  };
  const double I = integrator.integrate(f, 0.0, 1.0, 1e-14);
  return std::pow(tf.radius, tf.d + k) * std::pow(tf.mu_tf, s) * I;
}

void require_close(double a, double b, double rel, const char* what) {
  if (std::abs(a - b) > rel * std::max(std::abs(a), std::abs(b)))
    throw ConsistencyError(std::string(what) + ": closed form " + std::to_string(a) +
                           " vs " + std::to_string(b));
}

}  // namespace

double omega_d(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw DomainError("dimension must be 1, 2 or 3");
  }
}

double mu_tf(int d, double p, double C0) {
  check_params(d, p, C0);
  const double base = p / (omega_d(d) * std::pow(C0, -d / p) * beta_fn(d / p, 1.5));
  return std::pow(base, 2.0 * p / (2.0 * d + p));
}

TFProfile tf_profile(int d, double p, double C0) {
  TFProfile tf;
  tf.d = d;
  tf.p = p;
  tf.C0 = C0;
  tf.mu_tf = mu_tf(d, p, C0);
  tf.radius = std::pow(tf.mu_tf / C0, 1.0 / p);
  tf.omega_d = omega_d(d);
  return tf;
}

double TFProfile::operator()(double r) const {
  if (r >= radius) return 0.0;
  const double v = mu_tf - C0 * std::pow(r, p);
  return v > 0.0 ? std::pow(v, 0.25) : 0.0;
}

double u_tf(const TFProfile& profile, double r) { return profile(r); }

TFIntegrals tf_integrals_quadrature(const TFProfile& tf) {
  TFIntegrals out;
  out.mass = tf.omega_d * radial_moment_quadrature(tf, 0.0, 0.5);
  out.quintic_norm = tf.omega_d * radial_moment_quadrature(tf, 0.0, 1.5);
  out.weighted_mass = tf.omega_d * radial_moment_quadrature(tf, tf.p, 0.5);
  out.tf_energy = 0.5 * tf.C0 * out.weighted_mass + out.quintic_norm / 6.0;
  return out;
}

TFIntegrals tf_integrals(const TFProfile& tf) {
  TFIntegrals out;
  out.mass = tf.omega_d * radial_moment(tf, 0.0, 0.5);
  out.quintic_norm = tf.omega_d * radial_moment(tf, 0.0, 1.5);
  out.weighted_mass = tf.omega_d * radial_moment(tf, tf.p, 0.5);
  out.tf_energy = (2.0 * tf.d + tf.p) / (6.0 * tf.p) * out.quintic_norm;

  const auto quad = tf_integrals_quadrature(tf);
  constexpr double tol = 1e-9;
  require_close(out.mass, quad.mass, tol, "tf mass");
  require_close(out.quintic_norm, quad.quintic_norm, tol, "tf quintic norm");
  require_close(out.weighted_mass, quad.weighted_mass, tol, "tf weighted mass");
  require_close(out.tf_energy, quad.tf_energy, tol, "tf energy");
  return out;
}

double energy_limit_constant(int d, double p, double C0) {
  const auto tf = tf_profile(d, p, C0);
  const double value = tf.omega_d * (2.0 * d + p) * std::pow(C0, -d / p) *
                       std::pow(tf.mu_tf, (2.0 * d + 3.0 * p) / (2.0 * p)) / (4.0 * p * d) *
                       beta_fn((d + p) / p, 1.5);
  require_close(value, tf_integrals(tf).tf_energy, 1e-10, "energy limit constant");
  return value;
}

}  // namespace cqtf
