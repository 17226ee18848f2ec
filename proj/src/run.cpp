#include "cqtf/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json_writer.hpp"
#include "cqtf/diagnostics.hpp"
#include "cqtf/errors.hpp"
#include "cqtf/io.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace cqtf {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Tf: return "tf";
    case Command::Solve: return "solve";
    case Command::Sweep: return "sweep";
    case Command::Verify: return "verify";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (auto c : {Command::Tf, Command::Solve, Command::Sweep, Command::Verify})
    if (to_string(c) == name) return c;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

PotentialSpec PotentialRecord::build() const {
  const auto& q = params;
  switch (kind) {
    case PotentialKind::PurePower:
      return PotentialSpec::pure_power(tail.C0, tail.p);
    case PotentialKind::PolynomialSum: {
      if (q.empty() || q.size() % 2) throw ConfigError("PolynomialSum params: a1,p1,a2,p2,...");
      std::vector<PowerTerm> terms;
      for (std::size_t i = 0; i < q.size(); i += 2) terms.push_back({q[i], q[i + 1]});
      return PotentialSpec::polynomial_sum(std::move(terms), tail);
    }
    case PotentialKind::MagneticTrap:
      if (q.size() != 2) throw ConfigError("MagneticTrap params: a,b");
      return PotentialSpec::magnetic_trap(q[0], q[1], tail);
    case PotentialKind::Tabulated: {
      if (q.empty() || q.size() % 2) throw ConfigError("Tabulated params: r_0..r_k,v_0..v_k");
      const auto half = static_cast<std::ptrdiff_t>(q.size() / 2);
      return PotentialSpec::tabulated({q.begin(), q.begin() + half}, {q.begin() + half, q.end()},
                                      tail);
    }
  }
  throw ConfigError("unknown potential kind");
}

void RunConfig::validate() const {
  try {
    solver.validate();
    (void)potential.build();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (command == Command::Solve && !(N > 0.0)) throw ConfigError("solve needs N > 0");
  if (command == Command::Sweep || command == Command::Verify) {
    if (Ns.empty()) throw ConfigError("sweep/verify need --Ns");
    if (command == Command::Verify && Ns.size() < 3) throw ConfigError("verify needs at least 3 N values");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      if (!(Ns[i] > 1.0)) throw ConfigError("every N must exceed 1");
      if (i > 0 && !(Ns[i] > Ns[i - 1])) throw ConfigError("Ns must be strictly increasing");
    }
  }
  if (!(epsilon <= 0.0) && !(epsilon <= 0.5 * potential.build().sigma()))
    throw ConfigError("epsilon must lie in (0, sigma/2]");
  if (output_dir.empty()) throw ConfigError("output directory must be set");
  if (workers == 0) throw ConfigError("workers must be at least 1");
}

std::string config_to_json(const RunConfig& c) {
  const auto& s = c.solver;
  json j;
  j["command"] = std::string(to_string(c.command));
  j["potential"] = {{"kind", std::string(to_string(c.potential.kind))},
                    {"C0", c.potential.tail.C0},
                    {"p", c.potential.tail.p},
                    {"alpha", c.potential.tail.alpha},
                    {"C1", c.potential.tail.C1},
                    {"C2", c.potential.tail.C2},
                    {"params", c.potential.params}};
  j["solver"] = {{"d", s.grid.d},
                 {"kappa", s.kappa},
                 {"dt", s.dt},
                 {"tol_energy", s.tol_energy},
                 {"tol_residual", s.tol_residual},
                 {"tol_pohozaev", s.tol_pohozaev},
                 {"max_iter", s.max_iter},
                 {"grid_n", s.grid.n},
                 {"r_max", s.grid.r_max},
                 {"init", std::string(to_string(s.init))},
                 {"init_floor", s.init_floor},
                 {"backtrack_tolerance", s.backtrack_tolerance},
                 {"max_backtrack", s.max_backtrack}};
  j["N"] = c.N;
  j["Ns"] = c.Ns;
  j["epsilon"] = c.epsilon;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  return detail::dump(j);
}

RunConfig config_from_json(const std::string& text, RunConfig c) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    auto num = [](const json& obj, const char* key, auto& dst) {
      if (obj.contains(key)) dst = static_cast<std::decay_t<decltype(dst)>>(detail::read_number(obj[key]));
    };
    if (j.contains("command")) c.command = command_from_string(j["command"].get<std::string>());
    if (j.contains("potential")) {
      const auto& p = j["potential"];
      if (p.contains("kind"))
        c.potential.kind = potential_kind_from_string(p["kind"].get<std::string>());
      num(p, "C0", c.potential.tail.C0);
      num(p, "p", c.potential.tail.p);
      num(p, "alpha", c.potential.tail.alpha);
      num(p, "C1", c.potential.tail.C1);
      num(p, "C2", c.potential.tail.C2);
      if (p.contains("params")) c.potential.params = p["params"].get<std::vector<double>>();
    }
    if (j.contains("solver")) {
      const auto& s = j["solver"];
      auto& cfg = c.solver;
      if (s.contains("d")) cfg.grid.d = s["d"].get<int>();
      if (s.contains("kappa")) cfg.kappa = s["kappa"].get<int>();
      num(s, "dt", cfg.dt);
      num(s, "tol_energy", cfg.tol_energy);
      num(s, "tol_residual", cfg.tol_residual);
      num(s, "tol_pohozaev", cfg.tol_pohozaev);
      if (s.contains("max_iter")) cfg.max_iter = s["max_iter"].get<std::size_t>();
      if (s.contains("grid_n")) cfg.grid.n = s["grid_n"].get<std::size_t>();
      num(s, "r_max", cfg.grid.r_max);
      if (s.contains("init")) cfg.init = init_kind_from_string(s["init"].get<std::string>());
      num(s, "init_floor", cfg.init_floor);
      num(s, "backtrack_tolerance", cfg.backtrack_tolerance);
      num(s, "max_backtrack", cfg.max_backtrack);
    }
    num(j, "N", c.N);
    if (j.contains("Ns")) c.Ns = j["Ns"].get<std::vector<double>>();
    num(j, "epsilon", c.epsilon);
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Artifacts {
public:
  Artifacts(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.output_dir) { fs::create_directories(dir_); }

  void text(const std::string& name, const std::string& body) {
    write_file(dir_ / name, body);
    files_.push_back(name);
  }

  void state(std::size_t index, const GroundState& s, bool converged) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "%02zu", index);
    text(std::string("ground_state_") + stem + ".json", ground_state_json(s, converged));
    std::ofstream csv(dir_ / (std::string("field_") + stem + ".csv"), std::ios::binary);
    write_csv(csv, s.field_w);
    files_.push_back(std::string("field_") + stem + ".csv");
  }

  void manifest(int status) {
    json m;
    m["tool"] = "cqtf";
    m["version"] = CQTF_VERSION;
    m["created_utc"] = utc_now();
    m["exit_status"] = status;
    m["artifacts"] = files_;
    m["config"] = json::parse(config_to_json(cfg_));
    write_file(dir_ / "manifest.json", detail::dump(m));
  }

private:
  const RunConfig& cfg_;
  fs::path dir_;
  std::vector<std::string> files_;
};

void log_state(std::ostream& log, const GroundState& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "N=%.6g tau=%.6e e_tau=%.12f mu_tau=%.12f iters=%zu el=%.2e poh=%.2e\n",
                s.N, s.tau, s.e_tau, s.mu_tau, s.iterations, s.el_residual, s.pohozaev_residual);
  log << buf;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  const PotentialSpec spec = cfg.potential.build();
  const int d = cfg.solver.grid.d;
  Artifacts art(cfg);

  if (cfg.command == Command::Tf) {
    const auto table = tf_table_json(d, spec.p(), spec.C0());
    art.text("tf.json", table);
    log << table;
    art.manifest(kExitOk);
    return kExitOk;
  }

  std::vector<GroundState> states;
  try {
    if (cfg.command == Command::Solve) {
      states.push_back(solve_ground_state(cfg.solver, spec, cfg.N));
    } else {
      states = sweep(cfg.solver, spec, cfg.Ns, cfg.workers);
    }
  } catch (const SweepError& e) {
    for (std::size_t i = 0; i < e.completed().size(); ++i) art.state(i, e.completed()[i], true);
    try {
      std::rethrow_exception(e.cause());
    } catch (const NonConvergenceError& nc) {
      art.state(e.index(), nc.partial(), false);
    } catch (const InstabilityError& ie) {
      art.state(e.index(), ie.partial(), false);
    } catch (...) {
    }
    log << "solver failed: " << e.what() << '\n';
    art.manifest(kExitNonConvergence);
    return kExitNonConvergence;
  } catch (const NonConvergenceError& e) {
    art.state(0, e.partial(), false);
    log << "solver did not converge: " << e.what() << '\n';
    art.manifest(kExitNonConvergence);
    return kExitNonConvergence;
  } catch (const InstabilityError& e) {
    art.state(0, e.partial(), false);
    log << "solver unstable: " << e.what() << '\n';
    art.manifest(kExitNonConvergence);
    return kExitNonConvergence;
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    art.state(i, states[i], true);
    log_state(log, states[i]);
  }
  if (cfg.command != Command::Verify) {
    art.manifest(kExitOk);
    return kExitOk;
  }

  const auto profile = tf_profile(d, spec.p(), spec.C0());
  const auto report = scaling_report(states, profile, spec.sigma(), cfg.epsilon);
  const auto criteria = evaluate_criteria(report);
  art.text("report.json", report_json(report, criteria));
  std::ostringstream csv;
  write_report_csv(csv, report);
  art.text("report.csv", csv.str());
  write_report_summary(log, report, criteria);

  bool ok = true;
  for (const auto& c : criteria) ok = ok && (c.passed || !c.acceptance);
  const int status = ok ? kExitOk : kExitVerifyFailed;
  art.manifest(status);
  return status;
}

}  // namespace cqtf
