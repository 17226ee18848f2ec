#include "cqtf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <math.h>  // pchip.hpp in Boost 1.74 calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

#include "cqtf/errors.hpp"

namespace cqtf {

class TabulatedInterpolant {
public:
  TabulatedInterpolant(std::vector<double> r, std::vector<double> v)
      : r_max_(r.back()), pchip_(std::move(r), std::move(v)) {}

  double r_max() const { return r_max_; }
  double value(double r) const { return pchip_(r); }
  double slope(double r) const { return pchip_.prime(r); }

private:
  double r_max_;
  boost::math::interpolators::pchip<std::vector<double>> pchip_;
};

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::PurePower: return "PurePower";
    case PotentialKind::PolynomialSum: return "PolynomialSum";
    case PotentialKind::MagneticTrap: return "MagneticTrap";
    case PotentialKind::Tabulated: return "Tabulated";
  }
  return "?";
}

PotentialKind potential_kind_from_string(std::string_view name) {
  for (auto k : {PotentialKind::PurePower, PotentialKind::PolynomialSum,
                 PotentialKind::MagneticTrap, PotentialKind::Tabulated}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown potential kind '" + std::string(name) + "'");
}

namespace {

void check_tail(const TailConstants& t) {
  if (!(t.C0 > 0.0)) throw DomainError("potential: C0 must be positive");
  if (!(t.p >= 2.0)) throw DomainError("potential: p must be >= 2");
  if (!(t.alpha >= 0.0 && t.alpha < t.p)) throw DomainError("potential: alpha must lie in [0, p)");
  if (!(t.C1 >= 0.0) || !(t.C2 >= 0.0)) throw DomainError("potential: C1, C2 must be >= 0");
}

void check_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("potential: radius must be non-negative");
}

}  // namespace

double PotentialSpec::sigma() const { return std::min(tail_.p - tail_.alpha, 1.0); }

PotentialSpec PotentialSpec::pure_power(double C0, double p) {
  PotentialSpec s;
  s.kind_ = PotentialKind::PurePower;
  s.tail_ = {C0, p, 0.0, 0.0, 0.0};
  check_tail(s.tail_);
  return s;
}

PotentialSpec PotentialSpec::polynomial_sum(std::vector<PowerTerm> terms, TailConstants tail) {
  if (terms.empty()) throw DomainError("polynomial potential needs at least one term");
  for (const auto& t : terms) {
    if (!(t.coefficient > 0.0) || !(t.power >= 2.0))
      throw DomainError("polynomial potential terms need a_i > 0 and p_i >= 2");
  }
  check_tail(tail);
  PotentialSpec s;
  s.kind_ = PotentialKind::PolynomialSum;
  s.tail_ = tail;
  s.terms_ = std::move(terms);
  return s;
}

PotentialSpec PotentialSpec::magnetic_trap(double a, double b) {
  return magnetic_trap(a, b, TailConstants{1.0, 2.0, 0.0, 0.0, 0.0});
}

PotentialSpec PotentialSpec::magnetic_trap(double a, double b, TailConstants tail) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("magnetic trap needs a > 0 and b > 0");
  // V'(r) = 2r (1 - ab exp(-b r^2)) >= 0 for all r iff ab <= 1.
  if (a * b > 1.0) throw DomainError("magnetic trap with a*b > 1 is not monotone");
  check_tail(tail);
  PotentialSpec s;
  s.kind_ = PotentialKind::MagneticTrap;
  s.tail_ = tail;
  s.trap_a_ = a;
  s.trap_b_ = b;
  return s;
}

PotentialSpec PotentialSpec::tabulated(std::vector<double> r, std::vector<double> values,
                                       TailConstants tail) {
  if (r.size() != values.size()) throw DomainError("tabulated potential: size mismatch");
  if (r.size() < 4) throw DomainError("tabulated potential needs at least 4 knots");
  if (r.front() != 0.0) throw DomainError("tabulated potential must start at r = 0");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw DomainError("tabulated radii must be strictly increasing");
    if (values[i] < values[i - 1]) throw DomainError("tabulated potential must be non-decreasing");
  }
  if (values.front() < 0.0) throw DomainError("tabulated potential must be non-negative");
  check_tail(tail);
  PotentialSpec s;
  s.kind_ = PotentialKind::Tabulated;
  s.tail_ = tail;
  s.table_r_ = r;
  s.table_v_ = values;
  s.table_ = std::make_shared<const TabulatedInterpolant>(std::move(r), std::move(values));
  return s;
}

double eval(const PotentialSpec& spec, double r) {
  check_radius(r);
  switch (spec.kind()) {
    case PotentialKind::PurePower:
      return spec.C0() * std::pow(r, spec.p());
    case PotentialKind::PolynomialSum: {
      double v = 0.0;
      for (const auto& t : spec.terms()) v += t.coefficient * std::pow(r, t.power);
      return v;
    }
    case PotentialKind::MagneticTrap:
      return r * r + spec.trap_a() * std::exp(-spec.trap_b() * r * r);
    case PotentialKind::Tabulated: {
      const auto* table = spec.interpolant();
      if (r > table->r_max())
        throw ExtrapolationError("tabulated potential queried at r = " + std::to_string(r) +
                                 " beyond the last knot " + std::to_string(table->r_max()));
      return table->value(r);
    }
  }
  return 0.0;
}

VirialValue radial_virial(const PotentialSpec& spec, double r) {
  check_radius(r);
  switch (spec.kind()) {
    case PotentialKind::PurePower:
      return {spec.p() * spec.C0() * std::pow(r, spec.p()), false};
    case PotentialKind::PolynomialSum: {
      double v = 0.0;
      for (const auto& t : spec.terms()) v += t.power * t.coefficient * std::pow(r, t.power);
      return {v, false};
    }
    case PotentialKind::MagneticTrap: {
      const double r2 = r * r;
      return {2.0 * r2 * (1.0 - spec.trap_a() * spec.trap_b() * std::exp(-spec.trap_b() * r2)),
              false};
    }
    case PotentialKind::Tabulated: {
      const auto* table = spec.interpolant();
      if (r > table->r_max())
        throw ExtrapolationError("tabulated potential derivative requested beyond the table");
      if (r < table->r_max()) return {r * table->slope(r), false};
      // Right end: only the one-sided derivative exists.
      const double h = 1e-6 * std::max(1.0, r);
      const double d = (table->value(r) - table->value(r - h)) / h;
      return {r * d, true};
    }
  }
  return {};
}

double rescaled_eval(const PotentialSpec& spec, double tau, double r) {
  if (spec.kind() == PotentialKind::PurePower) {
    check_radius(r);
    return spec.C0() * std::pow(r, spec.p());
  }
  return std::pow(tau, spec.p()) * eval(spec, r / tau);
}

double rescaled_virial(const PotentialSpec& spec, double tau, double r) {
  if (spec.kind() == PotentialKind::PurePower) {
    check_radius(r);
    return spec.p() * spec.C0() * std::pow(r, spec.p());
  }
  return std::pow(tau, spec.p()) * radial_virial(spec, r / tau).value;
}

ConditionReport verify_tail_conditions(const PotentialSpec& spec,
                                       std::span<const double> r_samples, double tolerance) {
  if (r_samples.empty()) throw DomainError("verify_tail_conditions: no samples");
  for (std::size_t i = 1; i < r_samples.size(); ++i) {
    if (!(r_samples[i] > r_samples[i - 1]))
      throw DomainError("verify_tail_conditions: samples must be strictly increasing");
  }

  ConditionReport rep;
  rep.nonnegative = true;
  rep.nondecreasing = true;
  double prev = -1.0;
  for (double r : r_samples) {
    const double v = eval(spec, r);
    if (v < 0.0) rep.nonnegative = false;
    if (v < prev) rep.nondecreasing = false;
    prev = v;
  }

  const auto& t = spec.tail();
  const double r = r_samples.back();
  const double rp = std::pow(r, t.p);
  const double ra = std::pow(r, t.alpha);
  const double vir = radial_virial(spec, r).value;
  const double val = eval(spec, r);

  auto judge = [tolerance](double observed, double declared) {
    return TailLimit{observed, declared,
                     std::abs(observed - declared) <= tolerance * std::max(1.0, std::abs(declared))};
  };
  rep.r_eval = r;
  rep.virial_ratio = judge(vir / (t.p * rp), t.C0);
  rep.virial_subleading = judge((vir - t.C0 * t.p * rp) / ra, t.C1);
  rep.value_subleading = judge((val - t.C0 * rp) / ra, t.C2);
  return rep;
}

}  // namespace cqtf
