#include "holosep/holonomy.hpp"

#include "holosep/errors.hpp"

#include <cmath>
#include <string>

namespace holosep {
namespace {

const Complex kI(0.0, 1.0);

CMatrix anti_hermitian_part(const CMatrix& m) { return 0.5 * (m - m.adjoint()); }

// exp(h X) for anti-Hermitian X.
CMatrix step_exp(const CMatrix& x, double h) { return unitary_exp(kI * x, h); }

}  // namespace

std::string_view to_string(HolonomyMethod m) {
  return m == HolonomyMethod::projector_product ? "projector-product" : "midpoint-ode";
}

std::string_view to_string(GaugeSchedule s) {
  return s == GaugeSchedule::linear ? "linear" : "smoothstep";
}

HolonomyMethod holonomy_method_from_string(std::string_view name) {
  if (name == "projector-product") return HolonomyMethod::projector_product;
  if (name == "midpoint-ode") return HolonomyMethod::midpoint_ode;
  throw ValidationError("unknown holonomy method '" + std::string(name) + "'");
}

GaugeSchedule gauge_schedule_from_string(std::string_view name) {
  if (name == "linear") return GaugeSchedule::linear;
  if (name == "smoothstep") return GaugeSchedule::smoothstep;
  throw ValidationError("unknown gauge schedule '" + std::string(name) + "'");
}

CMatrix ordered_exponential(const std::vector<CMatrix>& generators, double h, Ordering ordering) {
  if (generators.empty()) throw ValidationError("ordered_exponential: no samples");
  const Index n = generators.front().rows();
  CMatrix out = CMatrix::Identity(n, n);
  for (const auto& x : generators) {
    const CMatrix e = step_exp(anti_hermitian_part(x), h);
    out = ordering == Ordering::time_ordered ? CMatrix(e * out) : CMatrix(out * e);
  }
  return out;
}

std::vector<CMatrix> evolution_operator(const FrameTrajectory& traj) {
  const CMatrix psi0_adj = traj.initial().adjoint();
  std::vector<CMatrix> out;
  out.reserve(traj.frames.size());
  for (const auto& f : traj.frames) out.push_back(f.columns() * psi0_adj);
  return out;
}

std::vector<CMatrix> projector_derivative(const FrameTrajectory& traj) {
  std::vector<CMatrix> out;
  out.reserve(traj.projectors.size());
  for (std::size_t k = 0; k < traj.projectors.size(); ++k) {
    const CMatrix& h = traj.node_hamiltonians[k];
    const CMatrix& p = traj.projectors[k];
    const CMatrix pdot = -kI * (h * p - p * h);
    out.push_back(0.5 * (pdot + pdot.adjoint()));
  }
  return out;
}

std::vector<CMatrix> holonomy_operator(const FrameTrajectory& traj, HolonomyMethod method) {
  const std::size_t n = traj.grid.steps();
  const double h = traj.grid.step();
  const CMatrix& psi0 = traj.initial();
  const CMatrix psi0_adj = psi0.adjoint();
  const Index rank = traj.rank();

  std::vector<CMatrix> out;
  out.reserve(n + 1);
  out.push_back(traj.projectors.front());

  if (method == HolonomyMethod::projector_product) {
    CMatrix core = CMatrix::Identity(rank, rank);
    for (std::size_t k = 0; k < n; ++k) {
      const CMatrix& next = traj.frames[k + 1].columns();
      core = polar_unitary_factor(next.adjoint() * traj.frames[k].columns() * core);
      out.push_back(next * core * psi0_adj);
    }
    return out;
  }

  CMatrix gamma = traj.projectors.front();
  for (std::size_t k = 0; k < n; ++k) {
    const CMatrix& h_mid = traj.midpoint_hamiltonians[k];
    const CMatrix psi_mid = unitary_exp(h_mid, 0.5 * h) * traj.frames[k].columns();
    CMatrix p_mid = psi_mid * psi_mid.adjoint();
    p_mid = 0.5 * (p_mid + p_mid.adjoint());
    const CMatrix pdot = -kI * (h_mid * p_mid - p_mid * h_mid);
    const CMatrix kato = pdot * p_mid - p_mid * pdot;
    gamma = step_exp(anti_hermitian_part(kato), h) * gamma;
    const CMatrix& next = traj.frames[k + 1].columns();
    const CMatrix core = polar_unitary_factor(next.adjoint() * gamma * psi0);
    gamma = next * core * psi0_adj;
    out.push_back(gamma);
  }
  return out;
}

std::vector<CMatrix> dynamic_generator_at_nodes(const FrameTrajectory& traj) {
  std::vector<CMatrix> out;
  out.reserve(traj.frames.size());
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    const CMatrix& psi = traj.frames[k].columns();
    out.push_back(anti_hermitian_part(-kI * (psi.adjoint() * traj.node_hamiltonians[k] * psi)));
  }
  return out;
}

std::vector<CMatrix> dynamic_generator_at_midpoints(const FrameTrajectory& traj) {
  std::vector<CMatrix> out;
  out.reserve(traj.midpoint_hamiltonians.size());
  for (std::size_t k = 0; k < traj.midpoint_hamiltonians.size(); ++k) {
    const CMatrix& psi = traj.frames[k].columns();
    out.push_back(anti_hermitian_part(-kI * (psi.adjoint() * traj.midpoint_hamiltonians[k] * psi)));
  }
  return out;
}

DynamicOperator dynamic_operator(const FrameTrajectory& traj) {
  const double h = traj.grid.step();
  const CMatrix& psi0 = traj.initial();
  DynamicOperator dyn;
  dyn.F_mid = dynamic_generator_at_midpoints(traj);
  dyn.D.reserve(dyn.F_mid.size() + 1);
  dyn.D_hat.reserve(dyn.F_mid.size() + 1);

  CMatrix d = CMatrix::Identity(traj.rank(), traj.rank());
  dyn.D.push_back(d);
  dyn.D_hat.push_back(traj.projectors.front());
  for (const auto& f : dyn.F_mid) {
    d = d * step_exp(f, h);  // later factors on the right
    dyn.D.push_back(d);
    dyn.D_hat.push_back(psi0 * d * psi0.adjoint());
  }
  return dyn;
}

std::vector<CMatrix> dynamic_operator_adjoint(const FrameTrajectory& traj) {
  const double h = traj.grid.step();
  const CMatrix& psi0 = traj.initial();
  const CMatrix& p0 = traj.projectors.front();
  const Index dim = traj.dim();

  std::vector<CMatrix> out;
  out.reserve(traj.grid.steps() + 1);
  CMatrix x = CMatrix::Identity(dim, dim);
  out.push_back(p0);
  for (const auto& f : dynamic_generator_at_midpoints(traj)) {
    const CMatrix f_hat = psi0 * f * psi0.adjoint();
    x = step_exp(anti_hermitian_part(-f_hat), h) * x;  // later factors on the left
    out.push_back(x * p0);
  }
  return out;
}

OperatorTrajectory operator_trajectory(const FrameTrajectory& traj, HolonomyMethod method) {
  return {traj.grid, evolution_operator(traj), holonomy_operator(traj, method),
          dynamic_operator(traj).D_hat};
}

double separation_residual(const OperatorTrajectory& ops) {
  const std::size_t n = ops.grid.steps() + 1;
  if (ops.U_hat.size() != n || ops.Gamma_hat.size() != n || ops.D_hat.size() != n) {
    throw ValidationError("separation_residual: operator samples do not cover the same grid");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    worst = std::max(worst, (ops.U_hat[k] - ops.Gamma_hat[k] * ops.D_hat[k]).norm());
  }
  return worst;
}

CMatrix transformation_matrix(const FrameTrajectory& traj) {
  return traj.initial().adjoint() * traj.final();
}

CMatrix initial_frame_matrix(const FrameTrajectory& traj, const CMatrix& op) {
  return traj.initial().adjoint() * op * traj.initial();
}

double GaugeFrame::g(double t) const {
  const double s = t / grid.duration();
  return schedule == GaugeSchedule::linear ? s : s * s * (3.0 - 2.0 * s);
}

double GaugeFrame::g_prime(double t) const {
  const double s = t / grid.duration();
  return schedule == GaugeSchedule::linear ? 1.0 / grid.duration()
                                           : 6.0 * s * (1.0 - s) / grid.duration();
}

GaugeFrame build_gauge_frame(const FrameTrajectory& traj, GaugeSchedule schedule, double cyclic_tol) {
  if (!check_cyclic(traj, cyclic_tol)) {
    throw PreconditionError("build_gauge_frame: evolution is not cyclic (||P(T) - P(0)|| = " +
                            std::to_string(traj.cyclicity_defect) + ")");
  }
  GaugeFrame gauge{traj.grid, schedule, {}, {}, {}, false, 0.0};
  const CMatrix u_adj = transformation_matrix(traj).adjoint();
  UnitaryLog log = logm_unitary_principal(u_adj);
  if (log.near_branch_cut) {
    log = logm_unitary_principal(u_adj, kBranchShift);
    gauge.branch_shifted = true;
  }
  gauge.generator = log.value;

  const Index rank = traj.rank();
  gauge.phi.reserve(traj.frames.size());
  gauge.V.reserve(traj.frames.size());
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    CMatrix v = k == 0 ? CMatrix(CMatrix::Identity(rank, rank))
                       : expm_antihermitian(gauge.g(traj.grid.node(k)) * gauge.generator);
    gauge.phi.push_back(Frame::unchecked(traj.frames[k].columns() * v));
    gauge.V.push_back(std::move(v));
  }
  gauge.closure_residual = (gauge.phi.back().columns() - traj.initial()).norm();
  return gauge;
}

std::vector<CMatrix> connection_matrix(const GaugeFrame& gauge, const std::vector<CMatrix>& F_mid) {
  if (F_mid.size() != gauge.grid.steps()) {
    throw ValidationError("connection_matrix: need one F sample per step");
  }
  std::vector<CMatrix> out;
  out.reserve(F_mid.size());
  const double h = gauge.grid.step();
  for (std::size_t k = 0; k < F_mid.size(); ++k) {
    const double t = gauge.grid.midpoint(k);
    const CMatrix v = expm_antihermitian(gauge.g(t) * gauge.generator);
    // V'^dag V = -g' L since L commutes with V.  g' is taken as the node
    // increment of g so the gauge part sums to g(T) - g(0) exactly.
    const double dg = (gauge.g(gauge.grid.node(k + 1)) - gauge.g(gauge.grid.node(k))) / h;
    out.push_back(anti_hermitian_part(-dg * gauge.generator - v.adjoint() * F_mid[k] * v));
  }
  return out;
}

CMatrix matrix_holonomy(const std::vector<CMatrix>& A_mid, const TimeGrid& grid) {
  if (A_mid.size() != grid.steps()) throw ValidationError("matrix_holonomy: need one A sample per step");
  return ordered_exponential(A_mid, grid.step(), Ordering::time_ordered);
}

MatrixForms matrix_forms(const FrameTrajectory& traj, const GaugeFrame& gauge, const DynamicOperator& dyn) {
  MatrixForms forms;
  forms.F = dyn.F_mid;
  forms.A = connection_matrix(gauge, dyn.F_mid);
  forms.K.reserve(dyn.F_mid.size());
  for (std::size_t k = 0; k < dyn.F_mid.size(); ++k) {
    const CMatrix v = expm_antihermitian(gauge.g(gauge.grid.midpoint(k)) * gauge.generator);
    forms.K.push_back(anti_hermitian_part(v.adjoint() * dyn.F_mid[k] * v));
  }
  forms.Gamma_T = matrix_holonomy(forms.A, traj.grid);
  forms.D_T = dyn.D.back();
  forms.U_T = transformation_matrix(traj);
  forms.cyclic = true;
  return forms;
}

double theorem2_check(const MatrixForms& forms) {
  if (!forms.cyclic) throw PreconditionError("theorem2_check: evolution is not cyclic");
  return (forms.U_T - forms.Gamma_T * forms.D_T).norm();
}

double parallel_transport_residual(const std::vector<CMatrix>& samples, const TimeGrid& grid) {
  if (samples.size() != grid.steps() + 1) {
    throw ValidationError("parallel_transport_residual: samples do not cover the grid");
  }
  const double two_h = 2.0 * grid.step();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    worst = std::max(worst, (samples[k].adjoint() * (samples[k + 1] - samples[k - 1])).norm() / two_h);
  }
  return worst;
}

InseparableDiagnostic inseparable_form_diagnostic(const GaugeFrame& gauge, const MatrixForms& forms) {
  const double h = gauge.grid.step();
  std::vector<CMatrix> sum;
  sum.reserve(forms.A.size());
  for (std::size_t k = 0; k < forms.A.size(); ++k) sum.push_back(forms.A[k] + forms.K[k]);
  const CMatrix combined = ordered_exponential(sum, h, Ordering::time_ordered);
  const CMatrix split = ordered_exponential(forms.A, h, Ordering::time_ordered) *
                        ordered_exponential(forms.K, h, Ordering::time_ordered);
  return {(combined - forms.U_T).norm(), (forms.U_T - split).norm()};
}

}  // namespace holosep
