#pragma once

// Exponential-midpoint integration of i dU/dt = H(t) U on a uniform grid.

#include "holosep/hamiltonian.hpp"
#include "holosep/linalg.hpp"

#include <cstddef>
#include <vector>

namespace holosep {

inline constexpr std::size_t kReunitarizeEvery = 256;
inline constexpr double kDefaultCyclicTolerance = 1e-6;

/// Nodes t_k = k T / N, k = 0..N, with N >= 16.
class TimeGrid {
 public:
  TimeGrid(double duration, std::size_t steps);

  double duration() const { return duration_; }
  std::size_t steps() const { return steps_; }
  double step() const { return duration_ / static_cast<double>(steps_); }
  double node(std::size_t k) const { return duration_ * static_cast<double>(k) / static_cast<double>(steps_); }
  double midpoint(std::size_t k) const {
    return duration_ * (static_cast<double>(k) + 0.5) / static_cast<double>(steps_);
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double duration_;
  std::size_t steps_;
};

struct FrameTrajectory {
  TimeGrid grid;
  std::vector<Frame> frames;                  // psi(t_k), N + 1 entries
  std::vector<CMatrix> projectors;            // P(t_k) = psi psi^dag
  std::vector<CMatrix> node_hamiltonians;     // H(t_k)
  std::vector<CMatrix> midpoint_hamiltonians; // H(t_k + h/2), N entries
  double cyclicity_defect = 0.0;              // ||P(T) - P(0)||_F

  Index dim() const { return frames.front().dim(); }
  Index rank() const { return frames.front().rank(); }
  const CMatrix& initial() const { return frames.front().columns(); }
  const CMatrix& final() const { return frames.back().columns(); }
};

/// U(t_{k+1}) = exp(-i h H(t_k + h/2)) U(t_k), U(0) = 1, with a polar
/// re-unitarization every 256 steps.
std::vector<CMatrix> propagate_unitary(const HamiltonianSpec& spec, const TimeGrid& grid);

/// psi(t_k) = U(t_k) psi(0) using exactly the stepping of propagate_unitary.
FrameTrajectory propagate_frame(const HamiltonianSpec& spec, const Frame& frame0, const TimeGrid& grid);

/// Inclusive: true iff cyclicity_defect <= tol.
bool check_cyclic(const FrameTrajectory& traj, double tol = kDefaultCyclicTolerance);

}  // namespace holosep
