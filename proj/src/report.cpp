#include "holosep/report.hpp"

#include "holosep/errors.hpp"
#include "json_io.hpp"

#include <cmath>
#include <cstdio>

namespace holosep {
namespace {

using detail::child;
using detail::Json;
using detail::member;
using detail::number_at;
using detail::require_keys;

const Complex kI(0.0, 1.0);

Json optional_matrix(const std::optional<CMatrix>& m) {
  return m ? detail::matrix_to_json(*m) : Json(nullptr);
}

std::optional<CMatrix> optional_matrix_from(const Json& j, const std::string& path) {
  if (j.is_null()) return std::nullopt;
  return detail::matrix_from_json(j, path, -1, -1);
}

bool bool_at(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected a boolean");
  return j.get<bool>();
}

std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

double field(const Json& obj, const char* key, const std::string& path) {
  return number_at(member(obj, key, path), child(path, key));
}

Json tolerances_json(const Tolerances& t) {
  return {{"cyclic", t.cyclic},
          {"residual", t.residual},
          {"parallel_transport", t.parallel_transport},
          {"holonomic", t.holonomic}};
}

Json verdict_json(const HolonomicVerdict& v) {
  return {{"is_purely_holonomic", v.is_purely_holonomic},
          {"alpha", v.alpha ? Json(*v.alpha) : Json(nullptr)},
          {"residual", v.residual},
          {"tolerance", v.tolerance}};
}

HolonomicVerdict verdict_from(const Json& j, const std::string& path) {
  require_keys(j, {"is_purely_holonomic", "alpha", "residual", "tolerance"}, path);
  HolonomicVerdict v;
  v.is_purely_holonomic = bool_at(member(j, "is_purely_holonomic", path), child(path, "is_purely_holonomic"));
  const Json& a = member(j, "alpha", path);
  if (!a.is_null()) v.alpha = number_at(a, child(path, "alpha"));
  v.residual = field(j, "residual", path);
  v.tolerance = field(j, "tolerance", path);
  return v;
}

Json report_json(const SeparationReport& r) {
  Json theorem2 = "skipped: noncyclic";
  if (r.theorem2) {
    const Theorem2Block& t = *r.theorem2;
    theorem2 = {{"residual", t.residual},
                {"route_residual", t.route_residual},
                {"gauge_delta", t.gauge_delta},
                {"closure_residual", t.closure_residual},
                {"single_equation_residual", t.single_equation_residual},
                {"naive_split_residual", t.naive_split_residual}};
  }
  Json j = {{"digest", r.digest},
            {"dim", r.dim},
            {"rank", r.rank},
            {"grid", {{"duration", r.duration}, {"steps", r.steps}}},
            {"method", std::string(to_string(r.method))},
            {"gauge_schedule", std::string(to_string(r.schedule))},
            {"cyclicity_defect", r.cyclicity_defect},
            {"cyclic", r.cyclic},
            {"separation_residual", r.separation_residual},
            {"parallel_transport_residual", r.parallel_transport_residual},
            {"theorem2", std::move(theorem2)},
            {"verdict", r.verdict ? verdict_json(*r.verdict) : Json(nullptr)},
            {"U_T", optional_matrix(r.U_T)},
            {"Gamma_T", optional_matrix(r.Gamma_T)},
            {"D_T", detail::matrix_to_json(r.D_T)},
            {"flags", r.flags},
            {"initial_frame", detail::matrix_to_json(r.initial_frame)},
            {"final_frame", detail::matrix_to_json(r.final_frame)},
            {"tolerances", tolerances_json(r.tolerances)},
            {"passed", r.passed}};
  if (r.gate_check) {
    j["gate_check"] = {{"predicted_U", detail::matrix_to_json(r.gate_check->predicted_U)},
                       {"prediction_residual", r.gate_check->prediction_residual},
                       {"passed", r.gate_check->passed}};
  }
  return j;
}

// Best global phase e^{i phi} aligning b with a.
double phase_aligned_distance(const CMatrix& a, const CMatrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const double phi = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  return (a - std::exp(kI * phi) * b).norm();
}

}  // namespace

SeparationReport run_separation(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  SeparationReport r;
  r.tolerances = scenario.tolerances;
  if (options.tolerance) {
    r.tolerances.residual = *options.tolerance;
    r.tolerances.holonomic = *options.tolerance;
  }
  const Tolerances& tol = r.tolerances;
  r.digest = scenario_digest(scenario);
  r.method = options.method;
  r.schedule = options.schedule;
  r.steps = options.steps.value_or(scenario.steps);
  r.duration = scenario.hamiltonian.duration;

  const TimeGrid grid(r.duration, r.steps);
  const FrameTrajectory traj = propagate_frame(scenario.hamiltonian, scenario.initial_frame, grid);
  r.dim = traj.dim();
  r.rank = traj.rank();
  r.initial_frame = traj.initial();
  r.final_frame = traj.final();
  r.cyclicity_defect = traj.cyclicity_defect;
  r.cyclic = check_cyclic(traj, tol.cyclic);
  if (scenario.frame_adjustment > 0.0) r.flags.push_back("frame-reorthonormalized");

  const DynamicOperator dyn = dynamic_operator(traj);
  const OperatorTrajectory ops{grid, evolution_operator(traj), holonomy_operator(traj, options.method),
                               dyn.D_hat};
  r.separation_residual = separation_residual(ops);
  r.parallel_transport_residual = parallel_transport_residual(ops.Gamma_hat, grid);
  r.D_T = dyn.D.back();
  r.passed = r.separation_residual <= tol.residual && r.parallel_transport_residual <= tol.parallel_transport;

  if (!r.cyclic) {
    r.flags.push_back("noncyclic");
  } else {
    const GaugeFrame gauge = build_gauge_frame(traj, options.schedule, tol.cyclic);
    const GaugeSchedule other_schedule =
        options.schedule == GaugeSchedule::linear ? GaugeSchedule::smoothstep : GaugeSchedule::linear;
    const GaugeFrame other = build_gauge_frame(traj, other_schedule, tol.cyclic);
    const MatrixForms forms = matrix_forms(traj, gauge, dyn);
    const CMatrix other_gamma = matrix_holonomy(connection_matrix(other, dyn.F_mid), grid);
    const InseparableDiagnostic insep = inseparable_form_diagnostic(gauge, forms);

    Theorem2Block t;
    t.residual = theorem2_check(forms);
    t.route_residual = (forms.Gamma_T - initial_frame_matrix(traj, ops.Gamma_hat.back())).norm();
    t.gauge_delta = (forms.Gamma_T - other_gamma).cwiseAbs().maxCoeff();
    t.closure_residual = gauge.closure_residual;
    t.single_equation_residual = insep.route_residual;
    t.naive_split_residual = insep.naive_split_residual;
    r.theorem2 = t;
    r.U_T = forms.U_T;
    r.Gamma_T = forms.Gamma_T;
    r.verdict = purely_holonomic_check(r.D_T, tol.holonomic);
    if (gauge.branch_shifted || other.branch_shifted) r.flags.push_back("branch-cut-shift");
    if (!r.verdict->alpha) r.flags.push_back("alpha-undefined");
    r.passed = r.passed && t.residual <= tol.residual && t.route_residual <= tol.residual &&
               t.gauge_delta <= tol.residual && t.single_equation_residual <= tol.residual &&
               t.closure_residual <= tol.cyclic;
  }
  return r;
}

std::string serialize_report(const SeparationReport& report, bool pretty) {
  return report_json(report).dump(pretty ? 2 : -1) + (pretty ? "\n" : "");
}

SeparationReport parse_report(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("malformed report: ") + e.what());
  }
  require_keys(j, {"digest", "dim", "rank", "grid", "method", "gauge_schedule", "cyclicity_defect", "cyclic",
                   "separation_residual", "parallel_transport_residual", "theorem2", "verdict", "U_T",
                   "Gamma_T", "D_T", "flags", "initial_frame", "final_frame", "tolerances", "passed",
                   "gate_check"},
               "");
  SeparationReport r;
  r.digest = string_at(member(j, "digest", ""), "digest");
  r.dim = static_cast<Index>(field(j, "dim", ""));
  r.rank = static_cast<Index>(field(j, "rank", ""));
  const Json& grid = member(j, "grid", "");
  require_keys(grid, {"duration", "steps"}, "grid");
  r.duration = field(grid, "duration", "grid");
  r.steps = static_cast<std::size_t>(field(grid, "steps", "grid"));
  try {
    r.method = holonomy_method_from_string(string_at(member(j, "method", ""), "method"));
    r.schedule = gauge_schedule_from_string(string_at(member(j, "gauge_schedule", ""), "gauge_schedule"));
  } catch (const ValidationError& e) {
    throw ParseError("method", e.what());
  }
  r.cyclicity_defect = field(j, "cyclicity_defect", "");
  r.cyclic = bool_at(member(j, "cyclic", ""), "cyclic");
  r.separation_residual = field(j, "separation_residual", "");
  r.parallel_transport_residual = field(j, "parallel_transport_residual", "");

  const Json& t2 = member(j, "theorem2", "");
  if (t2.is_object()) {
    require_keys(t2, {"residual", "route_residual", "gauge_delta", "closure_residual",
                      "single_equation_residual", "naive_split_residual"},
                 "theorem2");
    r.theorem2 = Theorem2Block{field(t2, "residual", "theorem2"),
                               field(t2, "route_residual", "theorem2"),
                               field(t2, "gauge_delta", "theorem2"),
                               field(t2, "closure_residual", "theorem2"),
                               field(t2, "single_equation_residual", "theorem2"),
                               field(t2, "naive_split_residual", "theorem2")};
  } else if (t2 != Json("skipped: noncyclic")) {
    throw ParseError("theorem2", "expected an object or \"skipped: noncyclic\"");
  }

  const Json& v = member(j, "verdict", "");
  if (!v.is_null()) r.verdict = verdict_from(v, "verdict");
  r.U_T = optional_matrix_from(member(j, "U_T", ""), "U_T");
  r.Gamma_T = optional_matrix_from(member(j, "Gamma_T", ""), "Gamma_T");
  r.D_T = detail::matrix_from_json(member(j, "D_T", ""), "D_T", -1, -1);
  const Json& flags = member(j, "flags", "");
  if (!flags.is_array()) throw ParseError("flags", "expected an array");
  for (std::size_t i = 0; i < flags.size(); ++i) r.flags.push_back(string_at(flags[i], detail::element("flags", i)));
  r.initial_frame = detail::matrix_from_json(member(j, "initial_frame", ""), "initial_frame", -1, -1);
  r.final_frame = detail::matrix_from_json(member(j, "final_frame", ""), "final_frame", -1, -1);

  const Json& tj = member(j, "tolerances", "");
  require_keys(tj, {"cyclic", "residual", "parallel_transport", "holonomic"}, "tolerances");
  r.tolerances = Tolerances{field(tj, "cyclic", "tolerances"), field(tj, "residual", "tolerances"),
                            field(tj, "parallel_transport", "tolerances"), field(tj, "holonomic", "tolerances")};
  r.passed = bool_at(member(j, "passed", ""), "passed");

  if (const auto it = j.find("gate_check"); it != j.end()) {
    require_keys(*it, {"predicted_U", "prediction_residual", "passed"}, "gate_check");
    r.gate_check = GateCheck{
        detail::matrix_from_json(member(*it, "predicted_U", "gate_check"), "gate_check.predicted_U", -1, -1),
        field(*it, "prediction_residual", "gate_check"),
        bool_at(member(*it, "passed", "gate_check"), "gate_check.passed")};
  }
  return r;
}

SimulationTrace simulate(const Scenario& scenario, std::optional<std::size_t> steps) {
  validate(scenario);
  const TimeGrid grid(scenario.hamiltonian.duration, steps.value_or(scenario.steps));
  SimulationTrace trace{scenario_digest(scenario),
                        propagate_frame(scenario.hamiltonian, scenario.initial_frame, grid), {}, {}};
  trace.pdot = projector_derivative(trace.trajectory);
  trace.F = dynamic_generator_at_nodes(trace.trajectory);
  return trace;
}

std::string trace_csv(const SimulationTrace& trace) {
  const FrameTrajectory& traj = trace.trajectory;
  const Index l = traj.rank();
  std::string out = "t,pdot_norm";
  for (Index i = 1; i <= l; ++i) {
    for (Index j = 1; j <= l; ++j) {
      const std::string ij = std::to_string(i) + "_" + std::to_string(j);
      out += ",F_" + ij + "_real,F_" + ij + "_imag";
    }
  }
  out += ",overlap_fro\n";

  char buf[32];
  auto put = [&](double v, bool first = false) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!first) out += ',';
    out += buf;
  };
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    put(traj.grid.node(k), true);
    put(trace.pdot[k].norm());
    for (Index i = 0; i < l; ++i) {
      for (Index j = 0; j < l; ++j) {
        put(trace.F[k](i, j).real());
        put(trace.F[k](i, j).imag());
      }
    }
    put((traj.initial().adjoint() * traj.frames[k].columns()).norm());
    out += '\n';
  }
  return out;
}

std::string simulation_summary(const SimulationTrace& trace, bool pretty) {
  const FrameTrajectory& traj = trace.trajectory;
  double max_pdot = 0.0;
  for (const auto& p : trace.pdot) max_pdot = std::max(max_pdot, p.norm());
  const Json j = {{"digest", trace.digest},
                  {"dim", traj.dim()},
                  {"rank", traj.rank()},
                  {"grid", {{"duration", traj.grid.duration()}, {"steps", traj.grid.steps()}}},
                  {"cyclicity_defect", traj.cyclicity_defect},
                  {"max_pdot_norm", max_pdot},
                  {"final_overlap_fro", (traj.initial().adjoint() * traj.final()).norm()},
                  {"initial_frame", detail::matrix_to_json(traj.initial())},
                  {"final_frame", detail::matrix_to_json(traj.final())}};
  return j.dump(pretty ? 2 : -1) + (pretty ? "\n" : "");
}

Composition compose_segments(const SeparationReport& first, const SeparationReport& second,
                             const SeparationReport* full_run, double tol) {
  if (first.final_frame.rows() != second.initial_frame.rows() ||
      first.final_frame.cols() != second.initial_frame.cols() ||
      (first.final_frame - second.initial_frame).norm() > 1e-7) {
    throw PreconditionError("compose_segments: segment 2 does not start from segment 1's final frame");
  }
  Composition c;
  c.D_adjoint = second.D_T.adjoint() * first.D_T.adjoint();
  if (full_run) c.oracle_residual = (c.D_adjoint - full_run->D_T.adjoint()).norm();
  c.verdict = purely_holonomic_check(c.D_adjoint.adjoint(), tol);
  return c;
}

SeparationReport verify_gate_design(const GateDesign& design, const RunOptions& options) {
  SeparationReport r = run_separation(design.scenario, options);
  for (const auto& w : design.warnings) r.flags.push_back(w);
  GateCheck g;
  g.predicted_U = design.predicted_U;
  const CMatrix u = r.U_T ? *r.U_T : CMatrix(r.initial_frame.adjoint() * r.final_frame);
  g.prediction_residual = phase_aligned_distance(u, design.predicted_U);
  g.passed = r.cyclic && g.prediction_residual <= kGatePredictionTolerance && r.verdict &&
             r.verdict->is_purely_holonomic;
  r.gate_check = g;
  return r;
}

}  // namespace holosep
