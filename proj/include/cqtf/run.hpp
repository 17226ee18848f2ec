#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cqtf/minimizer.hpp"
#include "cqtf/potentials.hpp"

namespace cqtf {

enum class Command { Tf, Solve, Sweep, Verify };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

/// Serializable description of a potential. `params` depends on the kind:
/// PolynomialSum a1,p1,a2,p2,...; MagneticTrap a,b; Tabulated r_0..r_k,v_0..v_k.
struct PotentialRecord {
  PotentialKind kind = PotentialKind::PurePower;
  TailConstants tail;
  std::vector<double> params;

  PotentialSpec build() const;
};

struct RunConfig {
  Command command = Command::Tf;
  PotentialRecord potential;
  SolverConfig solver;
  double N = 1e4;
  std::vector<double> Ns;
  double epsilon = 0.0;  // <= 0 selects sigma / 2
  std::string output_dir = "cqtf_out";
  std::uint64_t seed = 0;
  unsigned workers = 1;

  /// Throws ConfigError when command-specific fields are missing or invalid.
  void validate() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

std::string config_to_json(const RunConfig& config);
/// Missing keys keep the values already in `base`.
RunConfig config_from_json(const std::string& text, RunConfig base = {});

/// Executes the command, writes artifacts under output_dir and a human
/// summary to `log`; returns one of the kExit codes.
int run(const RunConfig& config, std::ostream& log);

}  // namespace cqtf
