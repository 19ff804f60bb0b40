#include "holosep/analysis.hpp"

#include "holosep/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace holosep {
namespace {

const Complex kI(0.0, 1.0);

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Ascending eigen-positions [first, first + count) spanned by frame0.
std::pair<Index, Index> eigen_block(const HermitianEigen& eig, const CMatrix& frame0) {
  Index first = -1;
  Index count = 0;
  for (Index i = 0; i < eig.vectors.cols(); ++i) {
    const double weight = (frame0.adjoint() * eig.vectors.col(i)).squaredNorm();
    if (weight > 0.5) {
      if (first < 0) first = i;
      if (i != first + count) throw TrackingError("adiabatic_diagnostic: frame spans non-adjacent levels");
      ++count;
    }
  }
  if (count != frame0.cols()) {
    throw PreconditionError("adiabatic_diagnostic: initial frame does not span an eigenspace of H(0)");
  }
  return {first, count};
}

struct TrackedLevel {
  double energy;
  double gap;
};

TrackedLevel tracked_level(const CMatrix& h, Index first, Index count) {
  const HermitianEigen eig = hermitian_eigen(h);
  const RVector& e = eig.values;
  double gap = std::numeric_limits<double>::infinity();
  if (first > 0) gap = std::min(gap, e(first) - e(first - 1));
  if (first + count < e.size()) gap = std::min(gap, e(first + count) - e(first + count - 1));
  return {e.segment(first, count).mean(), gap};
}

CMatrix gate_frame(const CMatrix& basis, double amplitude_sq, double phase_a1, double phase_a2,
                   CVector* complement) {
  const Complex a1 = std::sqrt(amplitude_sq) * std::exp(kI * phase_a1);
  const Complex a2 = std::sqrt(1.0 - amplitude_sq) * std::exp(kI * phase_a2);
  CMatrix frame(3, 2);
  frame.col(0) = basis.col(0);
  frame.col(1) = std::conj(a2) * basis.col(1) - std::conj(a1) * basis.col(2);
  if (complement) *complement = a1 * basis.col(1) + a2 * basis.col(2);
  return frame;
}

void finish_scenario(GateDesign& d) {
  Scenario& s = d.scenario;
  s.hamiltonian.dim = 3;
  s.hamiltonian.duration = 1.0;
  const CMatrix h = d.basis * d.energies.cast<Complex>().asDiagonal() * d.basis.adjoint();
  s.hamiltonian.terms = {{pulse_profile(d.profile, d.pulse_area), 0.5 * (h + h.adjoint())}};
  s.initial_frame = orthonormalize_frame(gate_frame(d.basis, d.amplitude_sq, d.phase_a1, d.phase_a2,
                                                    &d.complement_state));
}

}  // namespace

HolonomicVerdict purely_holonomic_check(const CMatrix& D_T, double tol) {
  if (D_T.rows() != D_T.cols() || D_T.rows() == 0) {
    throw ValidationError("purely_holonomic_check: D(T) must be square");
  }
  if (unitarity_defect(D_T) > 1e-7) {
    throw ValidationError("purely_holonomic_check: D(T) is not unitary (defect " +
                          format_double(unitarity_defect(D_T)) + ")");
  }
  HolonomicVerdict v;
  v.tolerance = tol;
  const CMatrix d_adj = D_T.adjoint();
  const Index l = d_adj.rows();
  const Complex tr = d_adj.trace();
  if (std::abs(tr) <= kTracelessThreshold) {
    v.residual = std::sqrt(2.0 * static_cast<double>(l));
    v.is_purely_holonomic = false;
    return v;
  }
  const double alpha = wrap_phase(std::arg(tr));
  v.alpha = alpha;
  v.residual = (d_adj - std::exp(kI * alpha) * CMatrix::Identity(l, l)).norm();
  v.is_purely_holonomic = v.residual <= tol;
  return v;
}

AAPhase aa_phase(const FrameTrajectory& traj, double cyclic_tol) {
  if (traj.rank() != 1) throw PreconditionError("aa_phase: needs a single-state frame");
  if (!check_cyclic(traj, cyclic_tol)) throw PreconditionError("aa_phase: evolution is not cyclic");
  AAPhase out;
  const CMatrix overlap = traj.initial().adjoint() * traj.final();
  out.total = std::arg(overlap(0, 0));
  const double h = traj.grid.step();
  double integral = 0.0;
  for (std::size_t k = 0; k < traj.midpoint_hamiltonians.size(); ++k) {
    const CMatrix& psi = traj.frames[k].columns();
    integral += (psi.adjoint() * traj.midpoint_hamiltonians[k] * psi)(0, 0).real();
  }
  out.dynamic = -h * integral;
  out.geometric = wrap_phase(out.total - out.dynamic);
  const CMatrix gamma = initial_frame_matrix(traj, holonomy_operator(traj).back());
  out.holonomy_phase = std::arg(gamma(0, 0));
  out.cross_check = std::abs(wrap_phase(out.geometric - out.holonomy_phase));
  return out;
}

AdiabaticDiagnostic adiabatic_diagnostic(const HamiltonianSpec& spec, const Frame& frame0,
                                         const TimeGrid& grid) {
  const auto [first, count] = eigen_block(hermitian_eigen(eval_hamiltonian(spec, 0.0)), frame0.columns());
  const FrameTrajectory traj = propagate_frame(spec, frame0, grid);
  const std::vector<CMatrix> f_nodes = dynamic_generator_at_nodes(traj);

  AdiabaticDiagnostic out;
  out.min_gap = std::numeric_limits<double>::infinity();
  auto track = [&, first = first, count = count](const CMatrix& h, double t) {
    const TrackedLevel lvl = tracked_level(h, first, count);
    if (lvl.gap <= 1e-8) {
      throw TrackingError("adiabatic_diagnostic: level crossing near t = " + format_double(t));
    }
    out.min_gap = std::min(out.min_gap, lvl.gap);
    return lvl.energy;
  };

  for (std::size_t k = 0; k < f_nodes.size(); ++k) {
    const double e = track(traj.node_hamiltonians[k], grid.node(k));
    const CMatrix dev = f_nodes[k] + kI * e * CMatrix::Identity(count, count);
    out.max_generator_deviation = std::max(out.max_generator_deviation, dev.cwiseAbs().maxCoeff());
  }
  for (std::size_t k = 0; k < traj.midpoint_hamiltonians.size(); ++k) {
    out.energy_integral += grid.step() * track(traj.midpoint_hamiltonians[k], grid.midpoint(k));
  }
  const CMatrix u_t = transformation_matrix(traj);
  const CMatrix gamma_t = initial_frame_matrix(traj, holonomy_operator(traj).back());
  out.reduction_residual = (u_t - std::exp(-kI * out.energy_integral) * gamma_t).norm();
  return out;
}

std::string_view to_string(PulseShape p) {
  switch (p) {
    case PulseShape::constant: return "constant";
    case PulseShape::sine: return "sine";
    case PulseShape::linear: return "linear";
    case PulseShape::smoothstep: return "smoothstep";
  }
  return "constant";
}

PulseShape pulse_shape_from_string(std::string_view name) {
  if (name == "constant") return PulseShape::constant;
  if (name == "sine") return PulseShape::sine;
  if (name == "linear") return PulseShape::linear;
  if (name == "smoothstep") return PulseShape::smoothstep;
  throw ValidationError("unknown pulse profile '" + std::string(name) + "'");
}

CoefficientFunction pulse_profile(PulseShape shape, double area, double duration) {
  const double T = duration;
  switch (shape) {
    case PulseShape::constant: return coefficient::Constant{area / T};
    case PulseShape::sine: return coefficient::Sinusoid{kPi * area / (2.0 * T), kPi / T, 0.0, 0.0};
    case PulseShape::linear: return coefficient::Linear{0.0, 2.0 * area / (T * T)};
    case PulseShape::smoothstep: return coefficient::SmoothstepRamp{0.0, 2.0 * area / T, 0.0, T};
  }
  return coefficient::Constant{area / T};
}

double gate_amplitude_sq(const RVector& energies, int winding, int branch) {
  return static_cast<double>(branch) / static_cast<double>(winding) -
         energies(1) / (energies(2) - energies(1));
}

bool gate_feasible(const RVector& energies, int winding, int branch) {
  if (winding == 0) return false;
  const double a = gate_amplitude_sq(energies, winding, branch);
  return a > 0.0 && a < 1.0;
}

GateDesign design_one_parameter_gate(const CMatrix& hamiltonian, int winding, int branch,
                                     double phase_a1, double phase_a2, PulseShape profile) {
  if (hamiltonian.rows() != 3 || hamiltonian.cols() != 3) {
    throw ValidationError("design_one_parameter_gate: Hamiltonian must be 3 x 3");
  }
  if (hermiticity_defect(hamiltonian) > 1e-12) {
    throw ValidationError("design_one_parameter_gate: Hamiltonian is not Hermitian");
  }
  if (winding == 0) throw DesignError("design_one_parameter_gate: N = 0 gives a trivial gate");

  const HermitianEigen eig = hermitian_eigen(hamiltonian);
  GateDesign d;
  d.energies = eig.values.array() - eig.values(0);
  d.energies(0) = 0.0;
  if (d.energies(1) <= 1e-8 || d.energies(2) - d.energies(1) <= 1e-8) {
    throw DesignError("design_one_parameter_gate: spectrum is degenerate");
  }
  d.basis = eig.vectors;
  d.winding = winding;
  d.branch = branch;
  d.phase_a1 = phase_a1;
  d.phase_a2 = phase_a2;
  d.profile = profile;

  const double gap = d.energies(2) - d.energies(1);
  d.amplitude_sq = gate_amplitude_sq(d.energies, winding, branch);
  if (!(d.amplitude_sq > 0.0 && d.amplitude_sq < 1.0)) {
    throw InfeasibleDesignError(
        winding, branch, d.amplitude_sq,
        "design_one_parameter_gate: (N, m) = (" + std::to_string(winding) + ", " +
            std::to_string(branch) + ") is infeasible: |a1|^2 = m/N - E1/(E2 - E1) = " +
            format_double(d.amplitude_sq) + " is not in (0, 1)");
  }
  d.pulse_area = 2.0 * kPi * winding / gap;
  finish_scenario(d);

  d.predicted_U = CMatrix::Identity(2, 2);
  d.predicted_U(1, 1) = std::exp(-kI * (2.0 * kPi * winding * d.energies(1) / gap));
  if ((d.predicted_U - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12) {
    d.warnings.push_back("trivial-gate");
  }
  return d;
}

GateDesign detune_pulse_area(const GateDesign& design, double factor) {
  GateDesign d = design;
  d.pulse_area *= factor;
  finish_scenario(d);
  d.warnings.push_back("detuned-pulse-area");
  return d;
}

GateDesign detune_amplitude(const GateDesign& design, double factor) {
  GateDesign d = design;
  d.amplitude_sq *= factor;
  if (!(d.amplitude_sq > 0.0 && d.amplitude_sq < 1.0)) {
    throw ValidationError("detune_amplitude: detuned |a1|^2 leaves (0, 1)");
  }
  finish_scenario(d);
  d.warnings.push_back("detuned-amplitude");
  return d;
}

}  // namespace holosep
