#include "holosep/analysis.hpp"
#include "holosep/errors.hpp"
#include "holosep/report.hpp"
#include "holosep/scenario.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace holosep;

namespace {

RunOptions options(const std::string& method, const std::string& schedule, std::optional<std::size_t> steps,
                   std::optional<double> tol) {
  RunOptions o;
  o.method = holonomy_method_from_string(method);
  o.schedule = gauge_schedule_from_string(schedule);
  o.steps = steps;
  o.tolerance = tol;
  return o;
}

py::dict design_dict(const GateDesign& d) {
  py::dict out;
  out["energies"] = d.energies;
  out["N"] = d.winding;
  out["m"] = d.branch;
  out["amplitude_sq"] = d.amplitude_sq;
  out["pulse_area"] = d.pulse_area;
  out["profile"] = std::string(to_string(d.profile));
  out["predicted_U"] = d.predicted_U;
  out["scenario"] = serialize_scenario(d.scenario);
  out["warnings"] = d.warnings;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Holonomy/dynamics separation of subspace evolutions";

  auto base = py::register_exception<Error>(m, "HolosepError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  auto design = py::register_exception<DesignError>(m, "DesignError", base.ptr());
  py::register_exception<InfeasibleDesignError>(m, "InfeasibleDesignError", design.ptr());

  m.def("scenario_digest", [](const std::string& text) { return scenario_digest(parse_scenario(text)); },
        py::arg("scenario"));

  m.def(
      "run_separation",
      [](const std::string& text, const std::string& method, const std::string& schedule,
         std::optional<std::size_t> steps, std::optional<double> tol) {
        const Scenario s = parse_scenario(text);
        py::gil_scoped_release release;
        return serialize_report(run_separation(s, options(method, schedule, steps, tol)));
      },
      py::arg("scenario"), py::arg("method") = "projector-product", py::arg("schedule") = "linear",
      py::arg("steps") = py::none(), py::arg("tol") = py::none(),
      "Separation report as JSON text.");

  m.def(
      "simulate_csv",
      [](const std::string& text, std::optional<std::size_t> steps) {
        const Scenario s = parse_scenario(text);
        py::gil_scoped_release release;
        return trace_csv(simulate(s, steps));
      },
      py::arg("scenario"), py::arg("steps") = py::none());

  m.def(
      "purely_holonomic_check",
      [](const CMatrix& D, double tol) {
        const HolonomicVerdict v = purely_holonomic_check(D, tol);
        return py::make_tuple(v.is_purely_holonomic, v.alpha, v.residual);
      },
      py::arg("D"), py::arg("tol") = 1e-6, "(is_purely_holonomic, alpha or None, residual)");

  m.def(
      "design_gate",
      [](const CMatrix& h, int n, int branch, double ph1, double ph2, const std::string& profile) {
        return design_dict(design_one_parameter_gate(h, n, branch, ph1, ph2, pulse_shape_from_string(profile)));
      },
      py::arg("hamiltonian"), py::arg("N"), py::arg("m"), py::arg("phase_a1") = 0.0, py::arg("phase_a2") = 0.0,
      py::arg("profile") = "constant");

  m.def(
      "verify_gate",
      [](const CMatrix& h, int n, int branch, const std::string& profile, std::optional<double> amplitude_factor) {
        GateDesign d = design_one_parameter_gate(h, n, branch, 0.0, 0.0, pulse_shape_from_string(profile));
        if (amplitude_factor) d = detune_amplitude(d, *amplitude_factor);
        py::gil_scoped_release release;
        return serialize_report(verify_gate_design(d));
      },
      py::arg("hamiltonian"), py::arg("N"), py::arg("m"), py::arg("profile") = "constant",
      py::arg("detune_amplitude") = py::none(), "Separation report with gate_check, as JSON text.");
}
