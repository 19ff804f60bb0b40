#pragma once

// Purely holonomic verdicts, the Aharonov-Anandan and adiabatic reductions,
// and the one-parameter Hamiltonian gate designer.

#include "holosep/hamiltonian.hpp"
#include "holosep/holonomy.hpp"
#include "holosep/linalg.hpp"
#include "holosep/propagation.hpp"
#include "holosep/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holosep {

inline constexpr double kTracelessThreshold = 1e-9;

struct HolonomicVerdict {
  bool is_purely_holonomic = false;
  std::optional<double> alpha;  // arg tr D^dag in (-pi, pi]; empty when D^dag is traceless
  double residual = 0.0;        // ||D^dag - e^{i alpha} 1||_F
  double tolerance = 0.0;

  friend bool operator==(const HolonomicVerdict&, const HolonomicVerdict&) = default;
};

/// Verdict on D(T).  A traceless D^dag gets residual sqrt(2 l), the distance
/// to every multiple e^{i a} 1, and no alpha.  Throws ValidationError unless
/// D_T is unitary within 1e-7.
HolonomicVerdict purely_holonomic_check(const CMatrix& D_T, double tol);

struct AAPhase {
  double total = 0.0;      // arg <psi(0)|psi(T)>
  double dynamic = 0.0;    // -int <psi|H|psi> dt, midpoint rule
  double geometric = 0.0;  // total - dynamic, wrapped
  double holonomy_phase = 0.0;  // arg of the 1 x 1 Gamma(T)
  double cross_check = 0.0;     // |wrap(geometric - holonomy_phase)|
};

/// Throws PreconditionError unless rank is 1 and the trajectory is cyclic.
AAPhase aa_phase(const FrameTrajectory& traj, double cyclic_tol = kDefaultCyclicTolerance);

struct AdiabaticDiagnostic {
  double max_generator_deviation = 0.0;  // max_k max_ij |F_ij(t_k) + i E(t_k) delta_ij|
  double energy_integral = 0.0;          // int E dt, midpoint rule
  double reduction_residual = 0.0;       // ||U(T) - e^{-i int E} Gamma(T)||_F
  double min_gap = 0.0;                  // smallest gap to the rest of the spectrum
};

/// frame0 must span an eigenspace of H(0).  The tracked level is the block of
/// ascending eigenvalue positions it occupies at t = 0; a gap to a neighbour
/// of 1e-8 or less anywhere on the grid raises TrackingError.
AdiabaticDiagnostic adiabatic_diagnostic(const HamiltonianSpec& spec, const Frame& frame0,
                                         const TimeGrid& grid);

enum class PulseShape { constant, sine, linear, smoothstep };

std::string_view to_string(PulseShape p);
PulseShape pulse_shape_from_string(std::string_view name);  // throws ValidationError

/// Coefficient with int_0^duration omega = area.
CoefficientFunction pulse_profile(PulseShape shape, double area, double duration = 1.0);

struct GateDesign {
  RVector energies;           // E0 = 0 < E1 < E2 after the shift
  CMatrix basis;              // eigenvectors v0, v1, v2 of the shifted Hamiltonian
  int winding = 0;            // N
  int branch = 0;             // m
  double amplitude_sq = 0.0;  // |a1|^2
  double phase_a1 = 0.0;
  double phase_a2 = 0.0;
  double pulse_area = 0.0;    // theta_T
  PulseShape profile = PulseShape::constant;
  Scenario scenario;          // frame columns: psi_1(0), psi_2(0)
  CVector complement_state;   // psi_0(0) = a1 v1 + a2 v2
  CMatrix predicted_U;        // diag(1, e^{-i 2 pi N E1 / (E2 - E1)})
  std::vector<std::string> warnings;
};

/// |a1|^2 = m/N - E1/(E2 - E1) for the shifted spectrum.
double gate_amplitude_sq(const RVector& energies, int winding, int branch);
/// 0 < |a1|^2 < 1.
bool gate_feasible(const RVector& energies, int winding, int branch);

/// Throws DesignError for N = 0 or a degenerate spectrum (gap <= 1e-8) and
/// InfeasibleDesignError when |a1|^2 falls outside (0, 1).
GateDesign design_one_parameter_gate(const CMatrix& hamiltonian, int winding, int branch,
                                     double phase_a1 = 0.0, double phase_a2 = 0.0,
                                     PulseShape profile = PulseShape::constant);

/// Same design with the pulse area scaled by `factor`.  The evolution stops
/// being cyclic.
GateDesign detune_pulse_area(const GateDesign& design, double factor);
/// Same design with |a1|^2 scaled by `factor`.  Stays cyclic; the dynamic
/// phases of the two frame states no longer agree.
GateDesign detune_amplitude(const GateDesign& design, double factor);

}  // namespace holosep
