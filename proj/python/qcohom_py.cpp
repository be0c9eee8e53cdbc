// Python bindings: suites and reports, the inner-function demo, and direct
// access to the shift cocycles and the CAR relation suite.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "qcohom/car_flow.hpp"
#include "qcohom/cocycle_lab.hpp"
#include "qcohom/suites.hpp"

namespace py = pybind11;
using namespace qcohom;

namespace {

SuiteConfig make_config(const std::optional<std::string>& path, const std::optional<std::uint64_t>& seed,
                        const std::optional<int>& window, bool literal) {
  auto c = path ? load_config(*path) : default_config();
  if (seed) c.seed = *seed;
  if (window) c.windows = {*window};
  if (literal) c.literal = true;
  validate(c);
  return c;
}

InnerScenario scenario(const std::vector<Complex>& zeros, const std::vector<Complex>& spectrum, double phase) {
  InnerScenario s;
  s.phase = std::polar(1.0, phase);
  s.zeros = zeros;
  s.spectrum = spectrum;
  return s;
}

py::dict cocycle_report(const MultiplicativeCocycle& w, int horizon) {
  const auto r = verify_cocycle(w, horizon);
  const auto m = verify_markovian(w, horizon);
  py::dict d;
  d["cocycle"] = r.cocycle_residual;
  d["adjoint"] = r.adjoint_residual;
  d["unitarity"] = r.unitarity_residual;
  d["identity_at_zero"] = r.identity_at_zero;
  d["markovian"] = m.residual();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cocycle and cohomology verification suites";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<WindowOverflowError>(m, "WindowOverflowError", PyExc_IndexError);
  py::register_exception<NonMarkovianError>(m, "NonMarkovianError", PyExc_RuntimeError);

  m.def("suite_names", &suite_names);
  m.def("registered_findings", [] {
    std::vector<std::string> out;
    for (auto n : registered_findings()) out.emplace_back(n);
    return out;
  });

  m.def(
      "run_suite_jsonl",
      [](const std::string& name, std::optional<std::string> config, std::optional<std::uint64_t> seed,
         std::optional<int> window, bool literal, std::optional<std::string> out) {
        const auto c = make_config(config, seed, window, literal);
        SuiteOutput result;
        {
          py::gil_scoped_release release;
          result = run_suite(name, c);
        }
        if (out) write_outputs(*out, result.records, result.series, result.plots);
        return to_jsonl(result.records);
      },
      py::arg("name"), py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("window") = py::none(),
      py::arg("literal") = false, py::arg("out") = py::none(),
      "Run a suite and return its report as JSON Lines; optionally write report, series and plots to `out`.");

  m.def(
      "demo_inner",
      [](const std::vector<Complex>& zeros, const std::vector<Complex>& spectrum, int window, double phase) {
        const auto d = demo_inner(scenario(zeros, spectrum, phase), window);
        py::dict r;
        r["summary"] = d.summary;
        r["model_dimension"] = d.model_dimension;
        r["defect_index"] = d.defect_index;
        r["unitary_eigenvalues"] = d.unitary_eigenvalues;
        r["spectrum_mismatch"] = d.spectrum_mismatch;
        r["identity_residual"] = d.identity_residual;
        r["report"] = to_jsonl(d.output.records);
        return r;
      },
      py::arg("zeros"), py::arg("spectrum"), py::arg("window") = 64, py::arg("phase") = 0.0);

  m.def(
      "taylor_coefficients",
      [](const std::vector<Complex>& zeros, int count, double phase) {
        return taylor_coefficients(InnerFunction(std::polar(1.0, phase), zeros), count);
      },
      py::arg("zeros"), py::arg("count"), py::arg("phase") = 0.0);

  py::class_<MultiplicativeCocycle>(m, "Cocycle")
      .def_property_readonly("half_width", &MultiplicativeCocycle::half_width)
      .def_property_readonly("horizon", &MultiplicativeCocycle::horizon)
      .def_property_readonly("label", &MultiplicativeCocycle::label)
      .def("at", &MultiplicativeCocycle::at, py::arg("t"), "W_t on the window, rows and columns for sites -N..N-1")
      .def("verify", &cocycle_report, py::arg("horizon"))
      .def("defect_index", [](const MultiplicativeCocycle& w) {
        return wold_decompose(associated_isometry(w.certify_markovian())).defect_index;
      });

  m.def(
      "markovian_cocycle",
      [](const std::vector<Complex>& zeros, const std::vector<Complex>& spectrum, int window, int horizon, double phase,
         bool literal) {
        const auto s = scenario(zeros, spectrum, phase);
        return markovian_from_inner(ModelSpaceUnitary(model_space(s.theta(), window), spectrum), horizon,
                                    literal ? ConstructorForm::literal : ConstructorForm::corrected);
      },
      py::arg("zeros"), py::arg("spectrum"), py::arg("window") = 64, py::arg("horizon") = 6, py::arg("phase") = 0.0,
      py::arg("literal") = false);
  m.def("trivial_cocycle", &trivial_cocycle, py::arg("window"), py::arg("horizon") = 6);

  m.def(
      "car_relations",
      [](int lo, int hi) {
        const auto r = verify_relations(CarProcess(std::make_shared<const FermionWindow>(lo, hi)));
        py::dict d;
        d["car"] = r.car;
        d["adjoint"] = r.adjoint;
        d["min_anticommutator"] = r.min_anticommutator;
        d["anticommutator"] = r.anticommutator;
        d["unit_identity"] = r.unit_identity;
        d["number_commutator"] = r.number_commutator;
        d["number_commutator_star"] = r.number_commutator_star;
        d["additivity"] = r.additivity;
        d["parity_ok"] = r.parity_ok;
        d["witness"] = r.witness;
        return d;
      },
      py::arg("lo"), py::arg("hi"));
}
