#include "holosep/propagation.hpp"

#include "holosep/errors.hpp"

#include <cmath>
#include <string>

namespace holosep {
namespace {

template <class OnNode>
void integrate(const HamiltonianSpec& spec, const TimeGrid& grid, OnNode&& on_node) {
  const double h = grid.step();
  CMatrix u = CMatrix::Identity(spec.dim, spec.dim);
  on_node(std::size_t{0}, u);
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const CMatrix h_mid = eval_hamiltonian(spec, grid.midpoint(k));
    u = unitary_exp(h_mid, h) * u;
    if ((k + 1) % kReunitarizeEvery == 0) u = polar_unitary_factor(u);
    if (!all_finite(u)) throw NumericalError("propagation: non-finite state at step " + std::to_string(k + 1));
    on_node(k + 1, u);
  }
}

}  // namespace

TimeGrid::TimeGrid(double duration, std::size_t steps) : duration_(duration), steps_(steps) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("time grid: duration must be positive");
  }
  if (steps < 16) throw ValidationError("time grid: need at least 16 steps");
}

std::vector<CMatrix> propagate_unitary(const HamiltonianSpec& spec, const TimeGrid& grid) {
  validate(spec);
  std::vector<CMatrix> out;
  out.reserve(grid.steps() + 1);
  integrate(spec, grid, [&](std::size_t, const CMatrix& u) { out.push_back(u); });
  return out;
}

FrameTrajectory propagate_frame(const HamiltonianSpec& spec, const Frame& frame0, const TimeGrid& grid) {
  validate(spec);
  if (frame0.dim() != spec.dim) {
    throw ValidationError("propagate_frame: frame dimension " + std::to_string(frame0.dim()) +
                          " does not match Hamiltonian dimension " + std::to_string(spec.dim));
  }
  const std::size_t n = grid.steps();
  FrameTrajectory traj{grid, {}, {}, {}, {}, 0.0};
  traj.frames.reserve(n + 1);
  traj.projectors.reserve(n + 1);
  traj.node_hamiltonians.reserve(n + 1);
  traj.midpoint_hamiltonians.reserve(n);

  integrate(spec, grid, [&](std::size_t k, const CMatrix& u) {
    CMatrix psi = u * frame0.columns();
    CMatrix p = psi * psi.adjoint();
    traj.projectors.push_back(0.5 * (p + p.adjoint()));
    traj.frames.push_back(Frame::unchecked(std::move(psi)));
    traj.node_hamiltonians.push_back(eval_hamiltonian(spec, grid.node(k)));
    if (k < n) traj.midpoint_hamiltonians.push_back(eval_hamiltonian(spec, grid.midpoint(k)));
  });
  traj.cyclicity_defect = (traj.projectors.back() - traj.projectors.front()).norm();
  return traj;
}

bool check_cyclic(const FrameTrajectory& traj, double tol) { return traj.cyclicity_defect <= tol; }

}  // namespace holosep
