#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cqtf/errors.hpp"
#include "cqtf/io.hpp"
#include "cqtf/run.hpp"

using namespace cqtf;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cqtf_test_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting is fixed at 17 significant digits") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  }

  TEST_CASE("config round-trips through JSON") {
    RunConfig c;
    c.command = Command::Verify;
    c.potential.kind = PotentialKind::MagneticTrap;
    c.potential.params = {0.5, 1.0};
    c.solver.grid.d = 2;
    c.solver.kappa = -1;
    c.solver.dt = 0.05;
    c.Ns = {1e3, 1e4, 1e5};
    c.epsilon = 0.25;
    c.seed = 99;
    c.workers = 3;
    const auto text = config_to_json(c);
    const auto back = config_from_json(text);
    CHECK(config_to_json(back) == text);
    CHECK(back.potential.kind == PotentialKind::MagneticTrap);
    CHECK(back.Ns == c.Ns);
    CHECK(back.solver.grid.d == 2);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS_AS(config_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"command": "plot"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"potential": {"kind": "Bowl"}})"), ConfigError);
    RunConfig c;
    c.command = Command::Sweep;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.Ns = {1e4, 1e3};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.Ns = {1e3, 1e4};
    c.epsilon = 0.9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("tf command writes the constants table") {
    RunConfig c;
    c.output_dir = scratch("tf").string();
    std::ostringstream log;
    CHECK(run(c, log) == kExitOk);
    const auto text = slurp(fs::path(c.output_dir) / "tf.json");
    CHECK(text.find("\"mu_tf\": 0.63661977236758") != std::string::npos);
    CHECK(fs::exists(fs::path(c.output_dir) / "manifest.json"));
  }

  TEST_CASE("solve output is byte-identical across runs and the manifest re-ingests") {
    RunConfig c;
    c.command = Command::Solve;
    c.N = 1e3;
    c.solver.grid.n = 256;
    std::string first;
    for (int k = 0; k < 2; ++k) {
      c.output_dir = scratch("solve" + std::to_string(k)).string();
      std::ostringstream log;
      REQUIRE(run(c, log) == kExitOk);
      const auto text = slurp(fs::path(c.output_dir) / "ground_state_00.json");
      if (k == 0) first = text;
      else CHECK(text == first);
      CHECK(text.find("\"converged\": true") != std::string::npos);
      CHECK(fs::exists(fs::path(c.output_dir) / "field_00.csv"));
    }
    const auto manifest = slurp(fs::path(c.output_dir) / "manifest.json");
    const auto pos = manifest.find("\"config\": ");
    REQUIRE(pos != std::string::npos);
    const auto cfg_text = manifest.substr(pos + 10, manifest.rfind('}') - pos - 10);
    const auto back = config_from_json(cfg_text);
    CHECK(config_to_json(back) == config_to_json(c));
  }

  TEST_CASE("usage errors and non-convergence map to exit codes") {
    RunConfig c;
    c.command = Command::Solve;
    c.N = -5;
    c.output_dir = scratch("usage").string();
    std::ostringstream log;
    CHECK(run(c, log) == kExitUsage);

    c.N = 1e4;
    c.solver.max_iter = 3;
    c.output_dir = scratch("partial").string();
    CHECK(run(c, log) == kExitNonConvergence);
    const auto text = slurp(fs::path(c.output_dir) / "ground_state_00.json");
    CHECK(text.find("\"converged\": false") != std::string::npos);

    c.command = Command::Sweep;
    c.Ns = {1e2, 1e4};
    c.solver.max_iter = 1000;
    c.output_dir = scratch("partial_sweep").string();
    CHECK(run(c, log) == kExitNonConvergence);
    CHECK(fs::exists(fs::path(c.output_dir) / "ground_state_01.json"));
  }

  TEST_CASE("verify writes the report table") {
    RunConfig c;
    c.command = Command::Verify;
    c.Ns = {1e3, 1e4, 1e5};
    c.workers = 3;
    c.output_dir = scratch("verify").string();
    std::ostringstream log;
    CHECK(run(c, log) == kExitOk);
    const auto csv = slurp(fs::path(c.output_dir) / "report.csv");
    CHECK(csv.rfind("N,tau,e_tau,err_energy,mu_tau,err_mu,l2_err,l6_err,sup_K,sup_inner,max_outside\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(log.str().find("FAIL") == std::string::npos);
  }
}
