#include "holosep/scenario.hpp"

#include "holosep/errors.hpp"
#include "json_io.hpp"

#include <cmath>

namespace holosep {
namespace {

using detail::child;
using detail::element;
using detail::Json;
using detail::member;
using detail::number_at;
using detail::require_keys;

double optional_number(const Json& obj, const char* key, double fallback, const std::string& path) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : number_at(*it, child(path, key));
}

std::vector<double> number_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], element(path, i)));
  return out;
}

CoefficientFunction coefficient_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const Json& kind_json = member(j, "kind", path);
  if (!kind_json.is_string()) throw ParseError(child(path, "kind"), "expected a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "constant") {
    require_keys(j, {"kind", "value"}, path);
    return coefficient::Constant{number_at(member(j, "value", path), child(path, "value"))};
  }
  if (kind == "linear") {
    require_keys(j, {"kind", "offset", "slope"}, path);
    return coefficient::Linear{optional_number(j, "offset", 0.0, path),
                               number_at(member(j, "slope", path), child(path, "slope"))};
  }
  if (kind == "sinusoid") {
    require_keys(j, {"kind", "amplitude", "frequency", "phase", "offset"}, path);
    return coefficient::Sinusoid{
        number_at(member(j, "amplitude", path), child(path, "amplitude")),
        number_at(member(j, "frequency", path), child(path, "frequency")),
        optional_number(j, "phase", 0.0, path), optional_number(j, "offset", 0.0, path)};
  }
  if (kind == "smoothstep-ramp") {
    require_keys(j, {"kind", "from", "to", "start", "end"}, path);
    return coefficient::SmoothstepRamp{
        number_at(member(j, "from", path), child(path, "from")),
        number_at(member(j, "to", path), child(path, "to")),
        number_at(member(j, "start", path), child(path, "start")),
        number_at(member(j, "end", path), child(path, "end"))};
  }
  if (kind == "piecewise-constant") {
    require_keys(j, {"kind", "breakpoints", "values"}, path);
    return coefficient::PiecewiseConstant{
        number_list(member(j, "breakpoints", path), child(path, "breakpoints")),
        number_list(member(j, "values", path), child(path, "values"))};
  }
  throw ParseError(child(path, "kind"), "unknown coefficient kind '" + kind + "'");
}

struct CoefficientToJson {
  Json operator()(const coefficient::Constant& k) const {
    return {{"kind", "constant"}, {"value", k.value}};
  }
  Json operator()(const coefficient::Linear& k) const {
    return {{"kind", "linear"}, {"offset", k.offset}, {"slope", k.slope}};
  }
  Json operator()(const coefficient::Sinusoid& k) const {
    return {{"kind", "sinusoid"},
            {"amplitude", k.amplitude},
            {"frequency", k.frequency},
            {"phase", k.phase},
            {"offset", k.offset}};
  }
  Json operator()(const coefficient::SmoothstepRamp& k) const {
    return {{"kind", "smoothstep-ramp"}, {"from", k.from}, {"to", k.to}, {"start", k.start}, {"end", k.end}};
  }
  Json operator()(const coefficient::PiecewiseConstant& k) const {
    return {{"kind", "piecewise-constant"}, {"breakpoints", k.breakpoints}, {"values", k.values}};
  }
};

Tolerances tolerances_from_json(const Json& j, const std::string& path) {
  require_keys(j, {"cyclic", "residual", "parallel_transport", "holonomic"}, path);
  Tolerances t;
  t.cyclic = optional_number(j, "cyclic", t.cyclic, path);
  t.residual = optional_number(j, "residual", t.residual, path);
  t.parallel_transport = optional_number(j, "parallel_transport", t.parallel_transport, path);
  t.holonomic = optional_number(j, "holonomic", t.holonomic, path);
  for (double v : {t.cyclic, t.residual, t.parallel_transport, t.holonomic}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(path, "tolerances must be positive");
  }
  return t;
}

Json scenario_to_json(const Scenario& s) {
  Json terms = Json::array();
  for (const auto& term : s.hamiltonian.terms) {
    terms.push_back({{"coefficient", std::visit(CoefficientToJson{}, term.coefficient)},
                     {"matrix", detail::matrix_to_json(term.matrix)}});
  }
  return Json{{"dim", s.hamiltonian.dim},
              {"duration", s.hamiltonian.duration},
              {"steps", s.steps},
              {"terms", std::move(terms)},
              {"initial_frame", detail::matrix_to_json(s.initial_frame.columns())},
              {"tolerances",
               {{"cyclic", s.tolerances.cyclic},
                {"residual", s.tolerances.residual},
                {"parallel_transport", s.tolerances.parallel_transport},
                {"holonomic", s.tolerances.holonomic}}}};
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::size_t default_steps) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("malformed document: ") + e.what());
  }
  require_keys(doc, {"dim", "duration", "steps", "terms", "initial_frame", "tolerances"}, "");

  const Json& dim_json = member(doc, "dim", "");
  if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
    throw ParseError("dim", "expected a positive integer");
  }
  const Index dim = dim_json.get<Index>();
  const double duration = number_at(member(doc, "duration", ""), "duration");
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ParseError("duration", "must be positive");

  Scenario s;
  s.steps = default_steps;
  if (const auto it = doc.find("steps"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 16) {
      throw ParseError("steps", "expected an integer >= 16");
    }
    s.steps = it->get<std::size_t>();
  }

  const Json& terms = member(doc, "terms", "");
  if (!terms.is_array() || terms.empty()) throw ParseError("terms", "expected a non-empty array");
  s.hamiltonian.dim = dim;
  s.hamiltonian.duration = duration;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string tpath = element("terms", k);
    require_keys(terms[k], {"coefficient", "matrix"}, tpath);
    HamiltonianTerm term{
        coefficient_from_json(member(terms[k], "coefficient", tpath), child(tpath, "coefficient")),
        detail::matrix_from_json(member(terms[k], "matrix", tpath), child(tpath, "matrix"), dim, dim)};
    try {
      validate_coefficient(term.coefficient, duration);
    } catch (const ValidationError& e) {
      throw ParseError(child(tpath, "coefficient"), e.what());
    }
    s.hamiltonian.terms.push_back(std::move(term));
  }
  validate(s.hamiltonian);

  const CMatrix given =
      detail::matrix_from_json(member(doc, "initial_frame", ""), "initial_frame", dim, -1);
  if (given.cols() > dim) throw ParseError("initial_frame", "rank exceeds dim");
  const double defect =
      (given.adjoint() * given - CMatrix::Identity(given.cols(), given.cols())).norm();
  if (defect > 1e-6) {
    throw ValidationError("initial_frame: columns not orthonormal (||V^dag V - 1|| = " +
                          std::to_string(defect) + " > 1e-6)");
  }
  if (defect <= 1e-14) {
    s.initial_frame = Frame(given);
  } else {
    s.initial_frame = orthonormalize_frame(given);
    s.frame_adjustment = (s.initial_frame.columns() - given).norm();
  }

  if (const auto it = doc.find("tolerances"); it != doc.end()) {
    s.tolerances = tolerances_from_json(*it, "tolerances");
  }
  return s;
}

std::string serialize_scenario(const Scenario& s, bool pretty) {
  return scenario_to_json(s).dump(pretty ? 2 : -1) + (pretty ? "\n" : "");
}

void validate(const Scenario& s) {
  validate(s.hamiltonian);
  if (s.initial_frame.dim() != s.hamiltonian.dim) {
    throw ValidationError("initial frame dimension does not match the Hamiltonian");
  }
  (void)Frame(s.initial_frame.columns());
  if (s.steps < 16) throw ValidationError("steps must be >= 16");
}

std::string scenario_digest(const Scenario& s) {
  return detail::fnv1a_hex(serialize_scenario(s, false));
}

}  // namespace holosep
