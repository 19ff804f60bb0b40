// holosep: command-line driver for the holonomy/dynamics separation pipeline.
//
// Exit codes: 0 ok, 1 semantic failure, 2 input error, 3 numerical failure.

#include "holosep/analysis.hpp"
#include "holosep/errors.hpp"
#include "holosep/report.hpp"
#include "holosep/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace holosep;
using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

constexpr double kRoundingFloor = 1e-11;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t default_steps() {
  const char* env = std::getenv("HOLONOMY_DEFAULT_STEPS");
  if (!env || !*env) return kDefaultSteps;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v < 16) throw InputError("HOLONOMY_DEFAULT_STEPS must be an integer >= 16");
  return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + *path + "'");
  out << text;
}

Json matrix_json(const CMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ri = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) {
      throw InputError(std::string(flag) + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

struct CommonFlags {
  std::optional<std::size_t> steps;
  std::optional<double> tol;
  std::string method = "projector-product";
  std::string schedule = "linear";
  std::optional<std::string> output;

  void attach(CLI::App* cmd, bool with_run_flags = true) {
    cmd->add_option("--steps", steps, "grid steps N (>= 16)")->check(CLI::Range(16, 1 << 24));
    cmd->add_option("--output", output, "output path (default stdout)");
    if (!with_run_flags) return;
    cmd->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--method", method, "holonomy integrator")
        ->check(CLI::IsMember({"projector-product", "midpoint-ode"}));
    cmd->add_option("--gauge-schedule", schedule, "gauge-frame schedule")
        ->check(CLI::IsMember({"linear", "smoothstep"}));
  }

  RunOptions run_options() const {
    RunOptions o;
    o.method = holonomy_method_from_string(method);
    o.schedule = gauge_schedule_from_string(schedule);
    o.steps = steps;
    o.tolerance = tol;
    return o;
  }
};

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path), default_steps()); }

int cmd_simulate(const std::string& path, const CommonFlags& flags, const std::optional<std::string>& trace_path) {
  const SimulationTrace trace = simulate(load_scenario(path), flags.steps);
  const std::string csv = trace_csv(trace);
  if (trace_path) {
    write_output(trace_path, csv);
    write_output(flags.output, simulation_summary(trace));
  } else if (flags.output) {
    std::string csv_path = *flags.output;
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) csv_path.erase(dot);
    write_output(csv_path + ".csv", csv);
    write_output(flags.output, simulation_summary(trace));
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int cmd_separate(const std::string& path, const CommonFlags& flags, bool envelope) {
  const SeparationReport r = run_separation(load_scenario(path), flags.run_options());
  std::string text = serialize_report(r);
  if (envelope) {
    text = Json{{"generated_at", utc_timestamp()}, {"report", Json::parse(text)}}.dump(2) + "\n";
  }
  write_output(flags.output, text);
  return r.passed ? kExitOk : kExitSemantic;
}

int cmd_check_holonomic(const std::string& path, const CommonFlags& flags) {
  const SeparationReport r = run_separation(load_scenario(path), flags.run_options());
  if (!r.cyclic) {
    std::cerr << "check-holonomic: evolution is not cyclic (defect " << r.cyclicity_defect << " > "
              << r.tolerances.cyclic << ")\n";
    return kExitInput;
  }
  const HolonomicVerdict& v = *r.verdict;
  Json j = {{"digest", r.digest},
            {"is_purely_holonomic", v.is_purely_holonomic},
            {"alpha", v.alpha ? Json(*v.alpha) : Json(nullptr)},
            {"residual", v.residual},
            {"tolerance", v.tolerance}};
  write_output(flags.output, j.dump(2) + "\n");
  return v.is_purely_holonomic ? kExitOk : kExitSemantic;
}

struct DesignFlags {
  std::string energies;
  int winding = 0;
  int branch = 0;
  std::string phases = "0,0";
  std::string profile = "constant";
  bool verify = false;
  std::optional<double> detune_area;
  std::optional<double> detune_amplitude;
  std::optional<std::string> report_path;
};

int cmd_design_gate(const DesignFlags& d, const CommonFlags& flags) {
  const std::vector<double> e = parse_list(d.energies, "--energies");
  if (e.size() != 3) throw InputError("--energies: expected three comma-separated values");
  const std::vector<double> ph = parse_list(d.phases, "--phases");
  if (ph.size() != 2) throw InputError("--phases: expected two comma-separated values");
  CMatrix h = CMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) h(i, i) = e[static_cast<std::size_t>(i)];

  GateDesign design;
  try {
    design = design_one_parameter_gate(h, d.winding, d.branch, ph[0], ph[1], pulse_shape_from_string(d.profile));
  } catch (const InfeasibleDesignError& err) {
    std::cerr << "design-gate: infeasible: need 0 < m/N - E1/(E2 - E1) < 1; (N, m) = (" << err.winding() << ", "
              << err.branch() << ") gives |a1|^2 = " << err.amplitude_sq() << "\n";
    return kExitSemantic;
  }
  if (d.detune_area) design = detune_pulse_area(design, *d.detune_area);
  if (d.detune_amplitude) design = detune_amplitude(design, *d.detune_amplitude);
  if (flags.steps) design.scenario.steps = *flags.steps;

  const std::string scenario_text = serialize_scenario(design.scenario);
  Json out = {{"energies", std::vector<double>(design.energies.data(), design.energies.data() + 3)},
              {"N", design.winding},
              {"m", design.branch},
              {"amplitude_sq", design.amplitude_sq},
              {"phase_a1", design.phase_a1},
              {"phase_a2", design.phase_a2},
              {"pulse_area", design.pulse_area},
              {"profile", std::string(to_string(design.profile))},
              {"predicted_U", matrix_json(design.predicted_U)},
              {"warnings", design.warnings}};
  if (flags.output) {
    write_output(flags.output, scenario_text);
    out["scenario_path"] = *flags.output;
  } else {
    out["scenario"] = Json::parse(scenario_text);
  }
  for (const auto& w : design.warnings) std::cerr << "design-gate: warning: " << w << "\n";

  int code = kExitOk;
  if (d.verify) {
    const SeparationReport r = verify_gate_design(design, flags.run_options());
    out["report"] = Json::parse(serialize_report(r));
    if (!r.gate_check->passed) code = kExitSemantic;
  }
  write_output(d.report_path, out.dump(2) + "\n");
  return code;
}

struct Level {
  std::size_t steps;
  double separation;
  std::optional<double> theorem2;
};

int cmd_convergence(const std::string& path, const CommonFlags& flags, int levels) {
  const Scenario scenario = load_scenario(path);
  const std::size_t base = flags.steps.value_or(scenario.steps);
  RunOptions base_opts = flags.run_options();

  std::vector<std::future<Level>> jobs;
  for (int k = 0; k < levels; ++k) {
    RunOptions o = base_opts;
    o.steps = base << k;
    jobs.push_back(std::async(std::launch::async, [&scenario, o] {
      const SeparationReport r = run_separation(scenario, o);
      return Level{*o.steps, r.separation_residual,
                   r.theorem2 ? std::optional<double>(r.theorem2->residual) : std::nullopt};
    }));
  }
  std::vector<Level> table;
  for (auto& j : jobs) table.push_back(j.get());

  // Least-squares slope of log(residual) against log(h) over levels above the floor.
  std::vector<std::pair<double, double>> pts;
  for (const Level& l : table) {
    if (l.separation > kRoundingFloor) {
      pts.emplace_back(std::log(scenario.hamiltonian.duration / static_cast<double>(l.steps)),
                       std::log(l.separation));
    }
  }
  Json out = {{"digest", scenario_digest(scenario)}, {"levels", Json::array()}};
  for (const Level& l : table) {
    out["levels"].push_back({{"steps", l.steps},
                             {"h", scenario.hamiltonian.duration / static_cast<double>(l.steps)},
                             {"separation_residual", l.separation},
                             {"theorem2_residual", l.theorem2 ? Json(*l.theorem2) : Json(nullptr)}});
  }
  int code = kExitOk;
  if (pts.size() < 2) {
    out["order"] = nullptr;
    out["note"] = "residuals at rounding floor; order fit skipped";
  } else {
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    const double order = sxy / sxx;
    out["order"] = order;
    out["order_range"] = {1.7, 2.3};
    if (!(order >= 1.7 && order <= 2.3)) code = kExitSemantic;
  }

  std::cerr << std::setw(10) << "steps" << std::setw(26) << "separation_residual" << "\n";
  for (const Level& l : table) {
    std::cerr << std::setw(10) << l.steps << std::setw(26) << std::setprecision(6) << l.separation << "\n";
  }
  if (out["order"].is_null()) {
    std::cerr << "order: skipped (rounding floor)\n";
  } else {
    std::cerr << "order: " << out["order"].get<double>() << "\n";
  }
  write_output(flags.output, out.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holonomy/dynamics separation of subspace evolutions"};
  app.require_subcommand(1);

  std::string scenario_path;
  CommonFlags flags;

  auto* sim = app.add_subcommand("simulate", "propagate and write the frame trace");
  std::optional<std::string> trace_path;
  sim->add_option("scenario", scenario_path)->required();
  sim->add_option("--trace", trace_path, "CSV trace path");
  flags.attach(sim, false);

  auto* sep = app.add_subcommand("separate", "run the separation pipeline and write a report");
  bool envelope = false;
  sep->add_option("scenario", scenario_path)->required();
  sep->add_flag("--envelope", envelope, "wrap the report with a generation timestamp");
  flags.attach(sep);

  auto* chk = app.add_subcommand("check-holonomic", "purely holonomic verdict on a cyclic scenario");
  chk->add_option("scenario", scenario_path)->required();
  flags.attach(chk);

  auto* gate = app.add_subcommand("design-gate", "one-parameter Hamiltonian gate designer");
  DesignFlags design;
  gate->add_option("--energies", design.energies, "three energies, comma separated")->required();
  gate->add_option("--N", design.winding, "winding number (nonzero)")->required();
  gate->add_option("--m", design.branch, "branch integer")->required();
  gate->add_option("--phases", design.phases, "phases of a1,a2 in rad");
  gate->add_option("--profile", design.profile, "pulse profile")
      ->check(CLI::IsMember({"constant", "sine", "linear", "smoothstep"}));
  gate->add_flag("--verify", design.verify, "run the pipeline on the design");
  gate->add_option("--detune-area", design.detune_area, "scale the pulse area");
  gate->add_option("--detune-amplitude", design.detune_amplitude, "scale |a1|^2");
  gate->add_option("--report", design.report_path, "design summary path (default stdout)");
  flags.attach(gate);

  auto* conv = app.add_subcommand("convergence", "residuals at N, 2N, ... and fitted order");
  int levels = 3;
  conv->add_option("scenario", scenario_path)->required();
  conv->add_option("--levels", levels, "number of refinement levels")->check(CLI::Range(2, 12));
  flags.attach(conv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*sim) return cmd_simulate(scenario_path, flags, trace_path);
    if (*sep) return cmd_separate(scenario_path, flags, envelope);
    if (*chk) return cmd_check_holonomic(scenario_path, flags);
    if (*gate) return cmd_design_gate(design, flags);
    if (*conv) return cmd_convergence(scenario_path, flags, levels);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SingularityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const RankError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const TrackingError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
