#pragma once

// Full separation pipeline, its report, and the segment/gate checks built on
// top of it.

#include "holosep/analysis.hpp"
#include "holosep/holonomy.hpp"
#include "holosep/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace holosep {

struct RunOptions {
  HolonomyMethod method = HolonomyMethod::projector_product;
  GaugeSchedule schedule = GaugeSchedule::linear;
  std::optional<std::size_t> steps;  // overrides the scenario
  std::optional<double> tolerance;   // overrides the residual and holonomic tolerances
};

/// Matrix-form block, present only for cyclic runs.
struct Theorem2Block {
  double residual = 0.0;                // ||U(T) - Gamma(T) D(T)||_F, gauge-frame route
  double route_residual = 0.0;          // ||Gamma(T) - psi(0)^dag Gamma^(T) psi(0)||_F
  double gauge_delta = 0.0;             // max_ij |Gamma_lin(T) - Gamma_smooth(T)|
  double closure_residual = 0.0;        // ||phi(T) - psi(0)||_F
  double single_equation_residual = 0.0;  // ||T exp int (A + K) - U(T)||_F
  double naive_split_residual = 0.0;    // ||U(T) - T exp int A . T exp int K||_F (diagnostic)

  friend bool operator==(const Theorem2Block&, const Theorem2Block&) = default;
};

struct GateCheck {
  CMatrix predicted_U;
  double prediction_residual = 0.0;  // ||U(T) - e^{i phi} predicted_U||_F, best phi
  bool passed = false;               // residual <= 1e-5 and verdict true

  friend bool operator==(const GateCheck&, const GateCheck&) = default;
};

inline constexpr double kGatePredictionTolerance = 1e-5;

struct SeparationReport {
  std::string digest;
  Index dim = 0;
  Index rank = 0;
  double duration = 0.0;
  std::size_t steps = 0;
  HolonomyMethod method = HolonomyMethod::projector_product;
  GaugeSchedule schedule = GaugeSchedule::linear;
  double cyclicity_defect = 0.0;
  bool cyclic = false;
  double separation_residual = 0.0;
  double parallel_transport_residual = 0.0;
  std::optional<Theorem2Block> theorem2;  // empty: "skipped: noncyclic"
  std::optional<HolonomicVerdict> verdict;  // cyclic runs only
  std::optional<CMatrix> U_T;      // cyclic runs only
  std::optional<CMatrix> Gamma_T;  // cyclic runs only
  CMatrix D_T;
  std::vector<std::string> flags;
  CMatrix initial_frame;
  CMatrix final_frame;
  std::optional<GateCheck> gate_check;
  Tolerances tolerances;
  bool passed = false;  // every residual within tolerance

  friend bool operator==(const SeparationReport&, const SeparationReport&) = default;
};

/// Runs propagation, both separations and the verdict.  Numerical failures
/// propagate as NumericalError/SingularityError.
SeparationReport run_separation(const Scenario& scenario, const RunOptions& options = {});

/// Deterministic text form; floats round-trip exactly.
std::string serialize_report(const SeparationReport& report, bool pretty = true);
SeparationReport parse_report(std::string_view text);

struct SimulationTrace {
  std::string digest;
  FrameTrajectory trajectory;
  std::vector<CMatrix> pdot;  // dP/dt at the nodes
  std::vector<CMatrix> F;     // F at the nodes
};

SimulationTrace simulate(const Scenario& scenario, std::optional<std::size_t> steps = std::nullopt);

/// Columns: t, pdot_norm, F_<i>_<j>_real, F_<i>_<j>_imag (1-based), overlap_fro.
std::string trace_csv(const SimulationTrace& trace);
std::string simulation_summary(const SimulationTrace& trace, bool pretty = true);

struct Composition {
  CMatrix D_adjoint;                     // D^dag(T1 + T2) = D^dag(T1 + T2; T1) D^dag(T1)
  std::optional<double> oracle_residual; // against a single run over [0, T1 + T2]
  HolonomicVerdict verdict;
};

/// Segment 2 must start from segment 1's final frame within 1e-7, else
/// PreconditionError.
Composition compose_segments(const SeparationReport& first, const SeparationReport& second,
                             const SeparationReport* full_run = nullptr, double tol = 1e-6);

/// run_separation on the design's scenario plus a comparison with the
/// predicted gate.
SeparationReport verify_gate_design(const GateDesign& design, const RunOptions& options = {});

}  // namespace holosep
