#pragma once

// Separation of the subspace evolution operator into holonomy and dynamic
// operators, U^(t) = Gamma^(t) D^(t), and the matrix form U(T) = Gamma(T) D(T)
// for cyclic evolutions.
//
// Discretization: every ordered exponential is a product of single-step
// exponentials sampled at step midpoints.  Time ordering puts later factors
// on the left; reverse time ordering puts them on the right.
//
// Midpoint samples of F_ij = -i <psi_i|H|psi_j> use the midpoint frame of
// the exponential-midpoint step, psi(t_k + h/2) = exp(-i h/2 H_mid) psi(t_k).
// Because that propagator commutes with H_mid this equals
// -i psi(t_k)^dag H_mid psi(t_k), so no extra Hamiltonian evaluations are
// needed.

#include "holosep/linalg.hpp"
#include "holosep/propagation.hpp"

#include <string_view>
#include <vector>

namespace holosep {

enum class HolonomyMethod { projector_product, midpoint_ode };
enum class GaugeSchedule { linear, smoothstep };
enum class Ordering { time_ordered, reverse_time_ordered };

std::string_view to_string(HolonomyMethod m);
std::string_view to_string(GaugeSchedule s);
HolonomyMethod holonomy_method_from_string(std::string_view name);  // throws ValidationError
GaugeSchedule gauge_schedule_from_string(std::string_view name);    // throws ValidationError

/// Ordered product of exp(h * generator_k).  Time ordering: later on the left.
CMatrix ordered_exponential(const std::vector<CMatrix>& generators, double h, Ordering ordering);

/// U^(t_k) = sum_j |psi_j(t_k)><psi_j(0)|
std::vector<CMatrix> evolution_operator(const FrameTrajectory& traj);

/// dP/dt(t_k) = -i [H(t_k), P(t_k)]
std::vector<CMatrix> projector_derivative(const FrameTrajectory& traj);

/// Holonomy operator Gamma^(t_k), a partial isometry from P(0) onto P(t_k).
///
/// projector_product: Gamma^(t_k) = P(t_k) ... P(t_1) P(0).  The l x l core
/// psi(t_k)^dag Gamma^ psi(0) is replaced by its polar factor after every
/// step, which keeps the product second order in h.
///
/// midpoint_ode: dGamma^/dt = [dP/dt, P] Gamma^ (equivalent to dP/dt Gamma^
/// on the range of P) stepped with the generator at the midpoint frame,
/// followed by projection onto P(t_{k+1}) and core re-unitarization.
std::vector<CMatrix> holonomy_operator(const FrameTrajectory& traj,
                                       HolonomyMethod method = HolonomyMethod::projector_product);

/// Matrix elements of F at the nodes, symmetrized to exact anti-Hermiticity.
std::vector<CMatrix> dynamic_generator_at_nodes(const FrameTrajectory& traj);

/// Matrix elements of F at the step midpoints (see file comment).
std::vector<CMatrix> dynamic_generator_at_midpoints(const FrameTrajectory& traj);

struct DynamicOperator {
  std::vector<CMatrix> D;      // l x l, reverse time ordered, D(0) = 1
  std::vector<CMatrix> D_hat;  // d x d, psi(0) D psi(0)^dag
  std::vector<CMatrix> F_mid;  // l x l generator samples, one per step
};

DynamicOperator dynamic_operator(const FrameTrajectory& traj);

/// D^dag(t_k) assembled independently as the time-ordered exp(-int F^)
/// times P(0).
std::vector<CMatrix> dynamic_operator_adjoint(const FrameTrajectory& traj);

struct OperatorTrajectory {
  TimeGrid grid;
  std::vector<CMatrix> U_hat;
  std::vector<CMatrix> Gamma_hat;
  std::vector<CMatrix> D_hat;
};

OperatorTrajectory operator_trajectory(const FrameTrajectory& traj,
                                       HolonomyMethod method = HolonomyMethod::projector_product);

/// max_k ||U^(t_k) - Gamma^(t_k) D^(t_k)||_F.  Throws ValidationError when
/// the three sample sets do not cover the same grid.
double separation_residual(const OperatorTrajectory& ops);

/// U(T) = psi(0)^dag psi(T), the l x l matrix of U^(T) in the initial frame.
CMatrix transformation_matrix(const FrameTrajectory& traj);

/// l x l matrix of an operator on the initial frame, psi(0)^dag X psi(0).
CMatrix initial_frame_matrix(const FrameTrajectory& traj, const CMatrix& op);

struct GaugeFrame {
  TimeGrid grid;
  GaugeSchedule schedule;
  CMatrix generator;             // L = log U(T)^dag
  std::vector<Frame> phi;        // phi(t_k) = psi(t_k) V(t_k)
  std::vector<CMatrix> V;        // exp(g(t_k) L), V(0) = 1 exactly
  bool branch_shifted = false;   // U(T) had an eigenphase within 1e-6 of pi
  double closure_residual = 0.0; // ||phi(T) - psi(0)||_F

  double g(double t) const;
  double g_prime(double t) const;
};

inline constexpr double kBranchShift = 1e-3;

/// Closed gauge frame phi(T) = phi(0) = psi(0).  Throws PreconditionError
/// for a non-cyclic trajectory.
GaugeFrame build_gauge_frame(const FrameTrajectory& traj, GaugeSchedule schedule,
                             double cyclic_tol = kDefaultCyclicTolerance);

/// A(t) = V'^dag V - V^dag F V at the step midpoints, with V' = g' L V.
std::vector<CMatrix> connection_matrix(const GaugeFrame& gauge, const std::vector<CMatrix>& F_mid);

/// Gamma(T) = exp(A_{N-1} h) ... exp(A_0 h).
CMatrix matrix_holonomy(const std::vector<CMatrix>& A_mid, const TimeGrid& grid);

struct MatrixForms {
  std::vector<CMatrix> A;  // midpoints
  std::vector<CMatrix> F;  // midpoints
  std::vector<CMatrix> K;  // midpoints, -i <phi_i|H|phi_j> = V^dag F V
  CMatrix Gamma_T;
  CMatrix D_T;
  CMatrix U_T;
  bool cyclic = false;
};

MatrixForms matrix_forms(const FrameTrajectory& traj, const GaugeFrame& gauge, const DynamicOperator& dyn);

/// ||U(T) - Gamma(T) D(T)||_F.  Throws PreconditionError unless forms.cyclic.
double theorem2_check(const MatrixForms& forms);

/// max over interior nodes of ||Gamma^dag(t_k) (Gamma(t_{k+1}) - Gamma(t_{k-1})) / 2h||_F.
/// Accepts any operator samples; on U^ it measures the dynamical rotation.
double parallel_transport_residual(const std::vector<CMatrix>& samples, const TimeGrid& grid);

struct InseparableDiagnostic {
  /// ||T exp(int (A + K)) - U(T)||_F: the classic single-equation route.
  double route_residual = 0.0;
  /// ||U(T) - T exp(int A) T exp(int K)||_F: the naive split, valid only
  /// when A and K commute at all times.
  double naive_split_residual = 0.0;
};

InseparableDiagnostic inseparable_form_diagnostic(const GaugeFrame& gauge, const MatrixForms& forms);

}  // namespace holosep
