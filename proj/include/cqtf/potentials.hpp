#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace cqtf {

enum class PotentialKind { PurePower, PolynomialSum, MagneticTrap, Tabulated };

std::string_view to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(std::string_view name);

// Large-|x| behaviour declared for a potential:
//   x.grad V / (p |x|^p)             -> C0
//   (x.grad V - C0 p |x|^p) / |x|^a  -> C1
//   (V - C0 |x|^p) / |x|^a           -> C2
// alpha = 0 is read as "bounded subleading term".
struct TailConstants {
  double C0 = 1.0;
  double p = 2.0;
  double alpha = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
};

struct PowerTerm {
  double coefficient;
  double power;
};

class TabulatedInterpolant;

/// Radial trapping potential V(|x|). Immutable once built; the factories
/// reject inadmissible parameters with DomainError.
class PotentialSpec {
public:
  static PotentialSpec pure_power(double C0, double p);
  static PotentialSpec polynomial_sum(std::vector<PowerTerm> terms, TailConstants tail);
  /// |x|^2 + a exp(-b |x|^2), declared with C0 = 1, p = 2, alpha = 0.
  static PotentialSpec magnetic_trap(double a, double b);
  static PotentialSpec magnetic_trap(double a, double b, TailConstants tail);
  /// Monotone piecewise-cubic (PCHIP) interpolant through (r, V) knots.
  static PotentialSpec tabulated(std::vector<double> r, std::vector<double> values,
                                 TailConstants tail);

  PotentialKind kind() const { return kind_; }
  const TailConstants& tail() const { return tail_; }
  double C0() const { return tail_.C0; }
  double p() const { return tail_.p; }
  double alpha() const { return tail_.alpha; }
  /// Rate exponent min(p - alpha, 1).
  double sigma() const;

  const std::vector<PowerTerm>& terms() const { return terms_; }
  double trap_a() const { return trap_a_; }
  double trap_b() const { return trap_b_; }
  const std::vector<double>& table_r() const { return table_r_; }
  const std::vector<double>& table_values() const { return table_v_; }

  const TabulatedInterpolant* interpolant() const { return table_.get(); }

private:
  PotentialSpec() = default;

  PotentialKind kind_ = PotentialKind::PurePower;
  TailConstants tail_;
  std::vector<PowerTerm> terms_;
  double trap_a_ = 0.0;
  double trap_b_ = 0.0;
  std::vector<double> table_r_;
  std::vector<double> table_v_;
  std::shared_ptr<const TabulatedInterpolant> table_;
};

struct VirialValue {
  double value = 0.0;
  /// Set when the derivative came from a finite difference instead of the
  /// analytic form (right end of a table).
  bool numeric_fallback = false;
};

/// V(r). Throws DomainError for r < 0, ExtrapolationError past a table.
double eval(const PotentialSpec& spec, double r);

/// x.grad V(x) = r V'(r).
VirialValue radial_virial(const PotentialSpec& spec, double r);

/// tau^p V(r / tau): the trap as seen by the rescaled problem.
double rescaled_eval(const PotentialSpec& spec, double tau, double r);

/// tau^{p-1} grad V(x / tau).x, the virial term of the rescaled Pohozaev identity.
double rescaled_virial(const PotentialSpec& spec, double tau, double r);

struct TailLimit {
  double observed = 0.0;
  double declared = 0.0;
  bool passes = false;
};

struct ConditionReport {
  double r_eval = 0.0;
  TailLimit virial_ratio;       // -> C0
  TailLimit virial_subleading;  // -> C1
  TailLimit value_subleading;   // -> C2
  bool nonnegative = false;
  bool nondecreasing = false;

  bool passes() const {
    return virial_ratio.passes && virial_subleading.passes && value_subleading.passes &&
           nonnegative && nondecreasing;
  }
};

/// Audits the declared tail constants at the largest sample and the
/// monotonicity/non-negativity of V over all samples.
ConditionReport verify_tail_conditions(const PotentialSpec& spec,
                                       std::span<const double> r_samples,
                                       double tolerance = 1e-3);

}  // namespace cqtf
