#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "probreach/config.hpp"
#include "probreach/experiments.hpp"

namespace py = pybind11;
using namespace probreach;

namespace {

ExperimentPreset preset_with(const std::string& name, std::optional<double> delta, std::optional<double> epsilon,
                             std::optional<std::size_t> horizon) {
  ExperimentPreset p = make_preset(name);
  if (delta) p.delta = *delta;
  if (epsilon) p.epsilon = *epsilon;
  if (horizon) p.horizon = *horizon;
  return p;
}

py::dict tube_dict(const ReachTube& tube) {
  py::dict d;
  d["horizon"] = tube.horizon;
  d["delta"] = tube.delta;
  d["epsilon"] = tube.eps.epsilon;
  d["backend"] = backend_name(tube.backend);
  d["nominal"] = tube.nominal;
  d["sigma2"] = tube.sigma2;
  d["lipschitz"] = tube.lipschitz;
  d["Psi"] = tube.schedule.Psi;
  d["r_delta"] = tube.r_delta;
  std::vector<double> drs_radius;
  for (const auto& s : tube.drs) drs_radius.push_back(set_radius(s, NormSpec(set_dim(s))));
  d["drs_radius"] = drs_radius;
  return d;
}

}  // namespace

PYBIND11_MODULE(_probreach, m) {
  m.doc() = "Probabilistic reachable sets for discrete-time stochastic systems";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<EpsilonConstants>(m, "EpsilonConstants")
      .def_readonly("epsilon", &EpsilonConstants::epsilon)
      .def_readonly("eps1", &EpsilonConstants::eps1)
      .def_readonly("eps2", &EpsilonConstants::eps2)
      .def("__repr__", [](const EpsilonConstants& e) {
        return "EpsilonConstants(epsilon=" + std::to_string(e.epsilon) + ", eps1=" + std::to_string(e.eps1) +
               ", eps2=" + std::to_string(e.eps2) + ")";
      });

  py::class_<DeviationSchedule>(m, "DeviationSchedule")
      .def_readonly("horizon", &DeviationSchedule::horizon)
      .def_readonly("lipschitz", &DeviationSchedule::lipschitz)
      .def_readonly("sigma2", &DeviationSchedule::sigma2)
      .def_readonly("Psi", &DeviationSchedule::Psi)
      .def_readonly("worst", &DeviationSchedule::worst);

  m.def("epsilon_constants", &epsilon_constants, py::arg("epsilon"));
  m.def("build_schedule", &build_schedule, py::arg("lipschitz"), py::arg("sigma2"), py::arg("horizon"));
  m.def("constant_schedule", &constant_schedule, py::arg("lipschitz"), py::arg("sigma2"), py::arg("horizon"));
  m.def("amgf_bound", &amgf_bound, py::arg("schedule"), py::arg("n"), py::arg("delta"), py::arg("eps"), py::arg("t"));
  m.def("markov_bound", &markov_bound, py::arg("schedule"), py::arg("n"), py::arg("delta"), py::arg("t"));
  m.def("worstcase_bound", &worstcase_bound, py::arg("schedule"), py::arg("n"), py::arg("delta"), py::arg("eps"),
        py::arg("t"));
  m.def("expectation_bound", &expectation_bound, py::arg("schedule"), py::arg("n"), py::arg("t"));
  m.def("linear_exact_bound", &linear_exact_bound, py::arg("a_norm"), py::arg("sigma2"), py::arg("n"),
        py::arg("delta"), py::arg("eps"), py::arg("t"));
  m.def(
      "optimize_epsilon",
      [](const DeviationSchedule& s, std::size_t n, double delta, std::size_t t, std::size_t grid) {
        const auto c = optimize_epsilon(s, n, delta, t, grid);
        return py::make_tuple(c.constants, c.radius);
      },
      py::arg("schedule"), py::arg("n"), py::arg("delta"), py::arg("t"), py::arg("grid_size") = 64);

  m.def("amgf", &amgf, py::arg("n"), py::arg("lam"), py::arg("r"));
  m.def("amgf_quadrature_oracle", &amgf_quadrature_oracle, py::arg("n"), py::arg("lam"), py::arg("r"),
        py::arg("nodes") = 512);
  m.def(
      "_amgf_lemma_suite",
      [](std::size_t mc_samples, std::uint64_t seed) {
        AmgfSuiteOptions opt;
        opt.mc_samples = mc_samples;
        opt.seed = seed;
        py::gil_scoped_release release;
        return amgf_lemma_suite(opt).report.dump();
      },
      py::arg("mc_samples") = 100000, py::arg("seed") = 11);

  m.def("lipschitz_radius", &lipschitz_radius, py::arg("l_d"), py::arg("rho"), py::arg("r1"), py::arg("r2"),
        py::arg("t"));

  m.def("preset_names", &preset_names);
  m.def(
      "reach_tube",
      [](const std::string& name, const std::string& backend, std::optional<double> delta,
         std::optional<double> epsilon, std::optional<std::size_t> horizon, std::uint64_t seed) {
        const auto p = preset_with(name, delta, epsilon, horizon);
        TubeOptions opt;
        if (backend == "interval") opt.backend = DrsBackend::interval;
        else if (backend != "lipschitz") throw ConfigError("backend must be lipschitz or interval");
        opt.seed = seed;
        ReachTube tube;
        {
          py::gil_scoped_release release;
          tube = compute_reach_tube(p, opt);
        }
        return tube_dict(tube);
      },
      py::arg("preset"), py::arg("backend") = "lipschitz", py::arg("delta") = py::none(),
      py::arg("epsilon") = py::none(), py::arg("horizon") = py::none(), py::arg("seed") = 0);
  m.def(
      "simulate_deviations",
      [](const std::string& name, std::size_t n_traj, std::uint64_t seed, std::optional<std::size_t> horizon) {
        auto p = make_preset(name);
        EnsembleOptions opt;
        opt.n_traj = n_traj;
        opt.seed = seed;
        opt.keep_states = false;
        if (horizon) opt.horizon = *horizon;
        TrajectoryEnsemble ens;
        {
          py::gil_scoped_release release;
          ens = run_ensemble(p, opt);
        }
        const auto cols = static_cast<py::ssize_t>(ens.record_times.size());
        py::array_t<double> out({static_cast<py::ssize_t>(ens.n_traj), cols});
        std::copy(ens.deviations.begin(), ens.deviations.end(), out.mutable_data());
        return out;
      },
      py::arg("preset"), py::arg("n_traj") = 1000, py::arg("seed") = 0, py::arg("horizon") = py::none(),
      "Deviations ||X_t - x_t|| in the preset norm, shape (n_traj, T + 1).");
  m.def(
      "quantile_radius",
      [](std::vector<double> values, double delta) {
        TrajectoryEnsemble e;
        e.n_traj = values.size();
        e.record_times = {0};
        e.deviations = std::move(values);
        return empirical_quantile_radius(e, delta, 0);
      },
      py::arg("deviations"), py::arg("delta"));

  m.def(
      "_run",
      [](const std::vector<std::string>& args) -> py::object {
        const auto cfg = parse_config(args);
        if (!cfg) return py::none();
        std::string manifest;
        {
          py::gil_scoped_release release;
          const RunOptions opt = cfg->run_options();
          ReportBundle bundle;
          if (cfg->subcommand == "amgf-check") bundle = amgf_report(opt);
          else if (cfg->subcommand == "experiment") bundle = reproduce_experiment(cfg->experiment, opt);
          else {
            const auto preset = resolve_system(*cfg);
            if (cfg->subcommand == "bound") bundle = bound_report(preset, opt);
            else if (cfg->subcommand == "drs") bundle = drs_report(preset, opt);
            else if (cfg->subcommand == "prs") bundle = prs_report(preset, opt);
            else bundle = simulate_report(preset, opt);
          }
          manifest = emit_results(bundle, cfg->out, cfg->to_json()).dump();
        }
        return py::str(manifest);
      },
      py::arg("args"));
}
