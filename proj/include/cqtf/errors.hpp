#pragma once

#include <stdexcept>
#include <string>

namespace cqtf {

/// Argument outside the mathematical domain of an operation (negative radius,
/// pole of Gamma, tau >= 1 where |ln tau| degenerates, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Tabulated potential queried beyond its last knot.
class ExtrapolationError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Two routes to the same quantity disagree beyond tolerance.
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Too few inputs for a fit or report.
class ArityError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid run configuration; maps to exit status 2 in the CLI.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cqtf
