#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "haarquench/cli.hpp"
#include "haarquench/concurrence.hpp"
#include "haarquench/experiment.hpp"
#include "haarquench/gme.hpp"
#include "haarquench/states.hpp"

namespace py = pybind11;
using namespace haarquench;

namespace {

DensityMatrix as_density(const ComplexMatrix& m) { return DensityMatrix(linalg::qubit_count(m), m); }

PureState as_pure(const ComplexVector& amplitudes) {
  const ComplexMatrix column = amplitudes;
  return PureState(linalg::qubit_count(column * column.adjoint()), amplitudes);
}

RunOptions options(unsigned workers) {
  RunOptions o;
  o.workers = workers;
  return o;
}

}  // namespace

PYBIND11_MODULE(_haarquench, m) {
  m.doc() = "Entanglement statistics of Haar-random qubit states under quenched disorder";

  static py::exception<Error> error(m, "HaarquenchError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) PyErr_SetString(PyExc_ValueError, e.what());
      else error(e.what());
    }
  });

  py::enum_<DistributionFamily>(m, "DistributionFamily")
      .value("gaussian", DistributionFamily::Gaussian)
      .value("uniform", DistributionFamily::Uniform)
      .value("cauchy_lorentz", DistributionFamily::CauchyLorentz);

  py::enum_<sdp::SdpStatus>(m, "SdpStatus")
      .value("optimal", sdp::SdpStatus::Optimal)
      .value("max_iterations", sdp::SdpStatus::MaxIterations)
      .value("numerical_failure", sdp::SdpStatus::NumericalFailure);

  py::class_<RngStream>(m, "RngStream", "Philox4x32-10 stream fixed by (master_seed, stream_index)")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("master_seed"), py::arg("stream_index"))
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", &RngStream::uniform)
      .def("standard_normal", &RngStream::standard_normal);

  m.def(
      "haar_raw",
      [](int n_qubits, std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return haar_raw(n_qubits, rng).reals;
      },
      py::arg("n_qubits"), py::arg("seed"), py::arg("stream") = 0,
      "Unnormalized real coefficient tuple (re, im per basis state) of a Haar-random state");
  m.def(
      "normalize",
      [](int n_qubits, std::vector<double> raw) { return normalize(RawCoefficients(n_qubits, std::move(raw))).amplitudes(); },
      py::arg("n_qubits"), py::arg("raw"));
  m.def(
      "inject_disorder",
      [](int n_qubits, std::vector<double> raw, std::vector<std::size_t> targets, DistributionFamily family, double siqr,
         std::uint64_t seed, std::uint64_t stream) {
        RngStream rng(seed, stream);
        return inject_disorder(RawCoefficients(n_qubits, std::move(raw)), targets, family, siqr, rng).reals;
      },
      py::arg("n_qubits"), py::arg("raw"), py::arg("targets"), py::arg("family"), py::arg("siqr"), py::arg("seed"),
      py::arg("stream") = 0);
  m.def(
      "with_white_noise", [](const ComplexVector& psi, double p) { return with_white_noise(as_pure(psi), p).matrix(); },
      py::arg("amplitudes"), py::arg("p"));

  m.def("partial_transpose", &linalg::partial_transpose, py::arg("matrix"), py::arg("mask"),
        "Transpose the qubits selected by mask; qubit 0 is the most significant");
  m.def(
      "concurrence_pure", [](const ComplexVector& psi) { return concurrence_pure(as_pure(psi)); }, py::arg("amplitudes"));
  m.def(
      "concurrence_mixed", [](const ComplexMatrix& rho) { return concurrence_mixed(as_density(rho)); }, py::arg("rho"));
  m.def(
      "negativity", [](const ComplexMatrix& rho, QubitMask mask) { return negativity(as_density(rho), mask); },
      py::arg("rho"), py::arg("mask") = 1);

  py::class_<GmeValue>(m, "GmeValue")
      .def_readonly("value", &GmeValue::value)
      .def_readonly("raw_objective", &GmeValue::raw_objective)
      .def_readonly("solver_status", &GmeValue::solver_status)
      .def_readonly("relative_gap", &GmeValue::relative_gap)
      .def_readonly("iterations", &GmeValue::iterations)
      .def_readonly("loose_tolerance", &GmeValue::loose_tolerance)
      .def_property_readonly("witness", [](const GmeValue& g) { return g.witness.witness; })
      .def_property_readonly("certificate_valid", [](const GmeValue& g) { return g.witness.is_valid(); })
      .def("__repr__", [](const GmeValue& g) { return "GmeValue(value=" + std::to_string(g.value) + ")"; });

  m.def(
      "gme_monotone",
      [](const ComplexMatrix& rho) {
        py::gil_scoped_release release;
        return gme_monotone(as_density(rho));
      },
      py::arg("rho"));
  m.def(
      "gme_monotone_pure",
      [](const ComplexVector& psi) {
        py::gil_scoped_release release;
        return gme_monotone_pure(as_pure(psi));
      },
      py::arg("amplitudes"));
  m.def(
      "gme_bipartite",
      [](const ComplexMatrix& rho) {
        py::gil_scoped_release release;
        return gme_bipartite(as_density(rho));
      },
      py::arg("rho"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n_qubits", &ExperimentConfig::n_qubits)
      .def_readwrite("n_states", &ExperimentConfig::n_states)
      .def_readwrite("n_disorder_configs", &ExperimentConfig::n_disorder_configs)
      .def_readwrite("family", &ExperimentConfig::family)
      .def_readwrite("siqr", &ExperimentConfig::siqr)
      .def_readwrite("targets", &ExperimentConfig::targets)
      .def_readwrite("noise_p", &ExperimentConfig::noise_p)
      .def_readwrite("bin_width", &ExperimentConfig::bin_width)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def("validate", &ExperimentConfig::validate)
      .def("to_text", [](const ExperimentConfig& c) { return cli::format_config(c); })
      .def_static("from_text", [](const std::string& text) { return cli::parse_config(text); })
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; })
      .def("__repr__", [](const ExperimentConfig& c) { return cli::config_to_json(c).dump(); });

  py::class_<EntanglementHistogram>(m, "EntanglementHistogram")
      .def_readonly("bin_edges", &EntanglementHistogram::bin_edges)
      .def_readonly("percentages", &EntanglementHistogram::percentages)
      .def_readonly("mean", &EntanglementHistogram::mean)
      .def_readonly("std", &EntanglementHistogram::std)
      .def_readonly("n_samples", &EntanglementHistogram::n_samples)
      .def_readonly("zero_percentage", &EntanglementHistogram::zero_percentage);
  m.def(
      "histogram",
      [](std::vector<double> samples, double range_max, double bin_width) {
        return histogram(samples, range_max, bin_width);
      },
      py::arg("samples"), py::arg("range_max"), py::arg("bin_width") = 0.02);

  py::class_<RunDiagnostics>(m, "RunDiagnostics")
      .def_readonly("evaluations", &RunDiagnostics::evaluations)
      .def_readonly("loose_sdp_solves", &RunDiagnostics::loose_sdp_solves)
      .def_readonly("zero_vector_redraws", &RunDiagnostics::zero_vector_redraws);

  py::class_<CleanResult>(m, "CleanResult")
      .def_readonly("histogram", &CleanResult::histogram)
      .def_readonly("values", &CleanResult::values)
      .def_readonly("diagnostics", &CleanResult::diagnostics);

  py::class_<QuenchedResult>(m, "QuenchedResult")
      .def_readonly("clean", &QuenchedResult::clean)
      .def_readonly("quenched", &QuenchedResult::quenched)
      .def_readonly("diagnostics", &QuenchedResult::diagnostics)
      .def_property_readonly("clean_values",
                             [](const QuenchedResult& r) {
                               std::vector<double> v;
                               for (const auto& rec : r.records) v.push_back(rec.clean_entanglement);
                               return v;
                             })
      .def_property_readonly("quenched_values", [](const QuenchedResult& r) {
        std::vector<double> v;
        for (const auto& rec : r.records) v.push_back(rec.quenched_avg_entanglement);
        return v;
      });

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("significant_figures", &ConvergenceReport::significant_figures)
      .def_readonly("tol_mean", &ConvergenceReport::tol_mean)
      .def_readonly("tol_std", &ConvergenceReport::tol_std)
      .def_readonly("full_mean", &ConvergenceReport::full_mean)
      .def_readonly("full_std", &ConvergenceReport::full_std)
      .def_readonly("half_mean", &ConvergenceReport::half_mean)
      .def_readonly("half_std", &ConvergenceReport::half_std)
      .def_readonly("converged", &ConvergenceReport::converged);

  m.def(
      "run_clean",
      [](const ExperimentConfig& c, unsigned workers) {
        py::gil_scoped_release release;
        return run_clean(c, options(workers));
      },
      py::arg("config"), py::arg("workers") = 0);
  m.def(
      "run_quenched",
      [](const ExperimentConfig& c, unsigned workers) {
        py::gil_scoped_release release;
        return run_quenched(c, options(workers));
      },
      py::arg("config"), py::arg("workers") = 0);
  m.def(
      "run_gamma_sweep",
      [](const ExperimentConfig& c, std::vector<double> gammas, unsigned workers) {
        py::gil_scoped_release release;
        return run_gamma_sweep(c, gammas, options(workers));
      },
      py::arg("config"), py::arg("gammas"), py::arg("workers") = 0);
  m.def(
      "convergence_check",
      [](const ExperimentConfig& c, unsigned workers) {
        py::gil_scoped_release release;
        return convergence_check(c, options(workers));
      },
      py::arg("config"), py::arg("workers") = 0);

  m.def(
      "preset",
      [](const std::string& name, std::uint64_t seed, double scale) {
        py::list curves;
        for (const auto& c : cli::make_preset(cli::parse_preset(name), seed, scale).curves)
          curves.append(py::make_tuple(c.name, c.config, c.quenched));
        return curves;
      },
      py::arg("name"), py::arg("seed") = 0, py::arg("scale") = 1.0,
      "List of (curve name, ExperimentConfig, quenched) for a named figure preset");
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (auto id : cli::all_presets()) names.emplace_back(cli::to_string(id));
    return names;
  });

  m.attr("SEED_SCHEDULE_VERSION") = kSeedScheduleVersion;
}
