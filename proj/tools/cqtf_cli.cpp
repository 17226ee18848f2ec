#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqtf/errors.hpp"
#include "cqtf/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the cubic-quintic NLS with a trap and their Thomas-Fermi limit"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string config_path;
  int d = 1;
  double p = 2, C0 = 1, alpha = 0, C1 = 0, C2 = 0, N = 1e4, rmax = 0, dt = 0.1, tol = 1e-6,
         epsilon = 0;
  int kappa = 1;
  std::vector<double> Ns;
  std::size_t grid_n = 2048;
  unsigned workers = 1;
  std::string out_dir;
  std::uint64_t seed = 0;

  app.add_option("command", command, "tf | solve | sweep | verify")->required();
  app.add_option("--config", config_path, "JSON config; flags override its values");
  auto* o_d = app.add_option("--d", d, "spatial dimension (1, 2, 3)");
  auto* o_p = app.add_option("--p", p, "trap exponent p >= 2");
  auto* o_C0 = app.add_option("--C0", C0, "trap constant");
  auto* o_alpha = app.add_option("--alpha", alpha, "subleading tail exponent");
  auto* o_C1 = app.add_option("--C1", C1, "subleading virial constant");
  auto* o_C2 = app.add_option("--C2", C2, "subleading value constant");
  auto* o_kappa = app.add_option("--kappa", kappa, "+1 defocusing, -1 focusing cubic term");
  auto* o_N = app.add_option("--N", N, "particle number for solve");
  auto* o_Ns = app.add_option("--Ns", Ns, "increasing particle numbers for sweep/verify")->delimiter(',');
  auto* o_n = app.add_option("--grid-n", grid_n, "number of radial nodes");
  auto* o_rmax = app.add_option("--rmax", rmax, "outer radius of the rescaled grid (0 = automatic)");
  auto* o_dt = app.add_option("--dt", dt, "flow step");
  auto* o_tol = app.add_option("--tol", tol, "Euler-Lagrange residual tolerance");
  auto* o_eps = app.add_option("--epsilon", epsilon, "layer parameter in (0, sigma/2]; 0 = sigma/2");
  auto* o_workers = app.add_option("--workers", workers, "concurrent solves in a sweep");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_seed = app.add_option("--seed", seed, "seed recorded with the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cqtf::kExitUsage;
  }

  cqtf::RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw cqtf::ConfigError("cannot read config " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = cqtf::config_from_json(ss.str());
    }
    cfg.command = cqtf::command_from_string(command);
    if (*o_d) cfg.solver.grid.d = d;
    if (*o_p) cfg.potential.tail.p = p;
    if (*o_C0) cfg.potential.tail.C0 = C0;
    if (*o_alpha) cfg.potential.tail.alpha = alpha;
    if (*o_C1) cfg.potential.tail.C1 = C1;
    if (*o_C2) cfg.potential.tail.C2 = C2;
    if (*o_kappa) cfg.solver.kappa = kappa;
    if (*o_N) cfg.N = N;
    if (*o_Ns) cfg.Ns = Ns;
    if (*o_n) cfg.solver.grid.n = grid_n;
    if (*o_rmax) cfg.solver.grid.r_max = rmax;
    if (*o_dt) cfg.solver.dt = dt;
    if (*o_tol) cfg.solver.tol_residual = tol;
    if (*o_eps) cfg.epsilon = epsilon;
    if (*o_workers) cfg.workers = workers;
    if (*o_out) cfg.output_dir = out_dir;
    if (*o_seed) cfg.seed = seed;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cqtf::kExitUsage;
  }

  try {
    return cqtf::run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
