#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cqtf/diagnostics.hpp"
#include "cqtf/errors.hpp"
#include "cqtf/grid.hpp"
#include "cqtf/io.hpp"
#include "cqtf/minimizer.hpp"
#include "cqtf/potentials.hpp"
#include "cqtf/run.hpp"
#include "cqtf/special_functions.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace py = pybind11;
using namespace cqtf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cubic-quintic NLS ground states and their Thomas-Fermi limit";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ExtrapolationError>(m, "ExtrapolationError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);
  py::register_exception<ArityError>(m, "ArityError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
  py::register_exception<SweepError>(m, "SweepError", PyExc_RuntimeError);

  // potentials
  py::enum_<PotentialKind>(m, "PotentialKind")
      .value("PurePower", PotentialKind::PurePower)
      .value("PolynomialSum", PotentialKind::PolynomialSum)
      .value("MagneticTrap", PotentialKind::MagneticTrap)
      .value("Tabulated", PotentialKind::Tabulated);

  py::class_<TailConstants>(m, "TailConstants")
      .def(py::init([](double C0, double p, double alpha, double C1, double C2) {
             return TailConstants{C0, p, alpha, C1, C2};
           }),
           py::arg("C0") = 1.0, py::arg("p") = 2.0, py::arg("alpha") = 0.0, py::arg("C1") = 0.0,
           py::arg("C2") = 0.0)
      .def_readwrite("C0", &TailConstants::C0)
      .def_readwrite("p", &TailConstants::p)
      .def_readwrite("alpha", &TailConstants::alpha)
      .def_readwrite("C1", &TailConstants::C1)
      .def_readwrite("C2", &TailConstants::C2);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def_static("pure_power", &PotentialSpec::pure_power, py::arg("C0"), py::arg("p"))
      .def_static(
          "polynomial_sum",
          [](const std::vector<std::pair<double, double>>& terms, const TailConstants& tail) {
            std::vector<PowerTerm> t;
            for (auto [a, p] : terms) t.push_back({a, p});
            return PotentialSpec::polynomial_sum(std::move(t), tail);
          },
          py::arg("terms"), py::arg("tail"))
      .def_static("magnetic_trap", py::overload_cast<double, double>(&PotentialSpec::magnetic_trap),
                  py::arg("a"), py::arg("b"))
      .def_static("tabulated", &PotentialSpec::tabulated, py::arg("r"), py::arg("values"), py::arg("tail"))
      .def_property_readonly("kind", &PotentialSpec::kind)
      .def_property_readonly("C0", &PotentialSpec::C0)
      .def_property_readonly("p", &PotentialSpec::p)
      .def_property_readonly("alpha", &PotentialSpec::alpha)
      .def_property_readonly("sigma", &PotentialSpec::sigma);

  m.def("eval", &eval, py::arg("spec"), py::arg("r"));
  m.def("radial_virial", [](const PotentialSpec& s, double r) {
    const auto v = radial_virial(s, r);
    return py::make_tuple(v.value, v.numeric_fallback);
  });
  m.def(
      "verify_tail_conditions",
      [](const PotentialSpec& s, const std::vector<double>& r, double tol) {
        const auto rep = verify_tail_conditions(s, r, tol);
        py::dict d;
        d["passes"] = rep.passes();
        d["virial_ratio"] = rep.virial_ratio.observed;
        d["virial_subleading"] = rep.virial_subleading.observed;
        d["value_subleading"] = rep.value_subleading.observed;
        d["nonnegative"] = rep.nonnegative;
        d["nondecreasing"] = rep.nondecreasing;
        return d;
      },
      py::arg("spec"), py::arg("r_samples"), py::arg("tolerance") = 1e-3);

  // thomas_fermi
  m.def("gamma_fn", &gamma_fn);
  m.def("beta_fn", &beta_fn);
  m.def("omega_d", &omega_d);
  m.def("mu_tf", &mu_tf, py::arg("d"), py::arg("p"), py::arg("C0"));
  m.def("energy_limit_constant", &energy_limit_constant, py::arg("d"), py::arg("p"), py::arg("C0"));
  py::class_<TFProfile>(m, "TFProfile")
      .def_readonly("d", &TFProfile::d)
      .def_readonly("p", &TFProfile::p)
      .def_readonly("C0", &TFProfile::C0)
      .def_readonly("mu_tf", &TFProfile::mu_tf)
      .def_readonly("radius", &TFProfile::radius)
      .def("__call__", &TFProfile::operator());
  m.def("tf_profile", &tf_profile, py::arg("d"), py::arg("p"), py::arg("C0"));
  m.def("tf_integrals", [](const TFProfile& prof) {
    const auto I = tf_integrals(prof);
    py::dict d;
    d["mass"] = I.mass;
    d["quintic_norm"] = I.quintic_norm;
    d["weighted_mass"] = I.weighted_mass;
    d["tf_energy"] = I.tf_energy;
    return d;
  });

  // grid
  py::class_<RadialGrid>(m, "RadialGrid")
      .def(py::init<int, std::size_t, double>(), py::arg("d"), py::arg("n"), py::arg("r_max"))
      .def_property_readonly("d", &RadialGrid::d)
      .def_property_readonly("n", &RadialGrid::size)
      .def_property_readonly("r_max", &RadialGrid::r_max)
      .def_property_readonly("h", &RadialGrid::h)
      .def("nodes", [](const RadialGrid& g) {
        std::vector<double> r(g.size());
        for (std::size_t j = 0; j < g.size(); ++j) r[j] = g.node(j);
        return r;
      });
  py::class_<RadialField>(m, "RadialField")
      .def(py::init<RadialGrid, std::vector<double>>(), py::arg("grid"), py::arg("values"))
      .def_readonly("grid", &RadialField::grid)
      .def_readwrite("values", &RadialField::values)
      .def_static("sample", &RadialField::sample);
  m.def("integrate", &integrate, py::arg("field"), py::arg("power"), py::arg("weight_p") = 0.0);
  m.def("lq_norm", &lq_norm, py::arg("field"), py::arg("q"));
  m.def("apply_radial_laplacian", &apply_radial_laplacian);

  // minimizer
  py::enum_<InitKind>(m, "InitKind")
      .value("SmoothedTF", InitKind::SmoothedTF)
      .value("Gaussian", InitKind::Gaussian)
      .value("WarmStart", InitKind::WarmStart);
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("kappa", &SolverConfig::kappa)
      .def_readwrite("dt", &SolverConfig::dt)
      .def_readwrite("tol_energy", &SolverConfig::tol_energy)
      .def_readwrite("tol_residual", &SolverConfig::tol_residual)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("init", &SolverConfig::init)
      .def_property(
          "d", [](const SolverConfig& c) { return c.grid.d; }, [](SolverConfig& c, int d) { c.grid.d = d; })
      .def_property(
          "n", [](const SolverConfig& c) { return c.grid.n; },
          [](SolverConfig& c, std::size_t n) { c.grid.n = n; })
      .def_property(
          "r_max", [](const SolverConfig& c) { return c.grid.r_max; },
          [](SolverConfig& c, double r) { c.grid.r_max = r; });
  py::class_<EnergyParts>(m, "EnergyParts")
      .def_readonly("kinetic", &EnergyParts::kinetic)
      .def_readonly("potential", &EnergyParts::potential)
      .def_readonly("quartic", &EnergyParts::quartic)
      .def_readonly("quintic", &EnergyParts::quintic)
      .def("total", &EnergyParts::total);
  py::class_<GroundState>(m, "GroundState")
      .def_readonly("N", &GroundState::N)
      .def_readonly("tau", &GroundState::tau)
      .def_readonly("kappa", &GroundState::kappa)
      .def_readonly("field_w", &GroundState::field_w)
      .def_readonly("mu_tau", &GroundState::mu_tau)
      .def_readonly("energy_parts", &GroundState::energy_parts)
      .def_readonly("e_tau", &GroundState::e_tau)
      .def_readonly("iterations", &GroundState::iterations)
      .def_readonly("el_residual", &GroundState::el_residual)
      .def_readonly("pohozaev_residual", &GroundState::pohozaev_residual)
      .def("energy_per_particle", &GroundState::energy_per_particle)
      .def("to_json", [](const GroundState& s) { return ground_state_json(s); });
  m.def("tau_of", &tau_of);
  m.def("energy_breakdown", &energy_breakdown);
  m.def(
      "solve_ground_state",
      [](const SolverConfig& c, const PotentialSpec& s, double N) { return solve_ground_state(c, s, N); },
      py::arg("config"), py::arg("spec"), py::arg("N"), py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("config"), py::arg("spec"), py::arg("Ns"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("lagrange_multiplier", &lagrange_multiplier);
  m.def("residuals", [](const GroundState& st, const PotentialSpec& s) {
    const auto r = residuals(st, s);
    return py::make_tuple(r.el_residual, r.pohozaev_residual);
  });
  m.def("rescale", &rescale);

  // diagnostics
  py::class_<ScalingFit>(m, "ScalingFit")
      .def_readonly("exponent", &ScalingFit::exponent)
      .def_readonly("log_prefactor", &ScalingFit::log_prefactor)
      .def_readonly("r_squared", &ScalingFit::r_squared)
      .def_readonly("n_points", &ScalingFit::n_points);
  m.def("fit_power_law", [](const std::vector<double>& x, const std::vector<double>& y) {
    return fit_power_law(x, y);
  });
  m.def(
      "verify_report",
      [](const std::vector<GroundState>& states, const TFProfile& prof, double sigma, double eps) {
        const auto rep = scaling_report(states, prof, sigma, eps);
        return report_json(rep, evaluate_criteria(rep));
      },
      py::arg("states"), py::arg("profile"), py::arg("sigma") = 1.0, py::arg("epsilon") = 0.0,
      "ConvergenceReport with criteria, as a JSON string.");

  // cli
  m.def(
      "run",
      [](const std::string& config_json) {
        const auto cfg = config_from_json(config_json);
        std::ostringstream log;
        int status;
        {
          py::gil_scoped_release release;
          status = run(cfg, log);
        }
        return py::make_tuple(status, log.str());
      },
      py::arg("config_json"), "Runs a JSON config; returns (exit status, log text).");
}
