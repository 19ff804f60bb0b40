#pragma once

// Scenario builders shared by the unit and acceptance tests.

#include "holosep/analysis.hpp"
#include "holosep/hamiltonian.hpp"
#include "holosep/linalg.hpp"
#include "holosep/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

namespace fixtures {

using namespace holosep;

inline const Complex I(0.0, 1.0);

inline CMatrix pauli_x() { return (CMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline CMatrix pauli_y() { return (CMatrix(2, 2) << 0, -I, I, 0).finished(); }
inline CMatrix pauli_z() { return (CMatrix(2, 2) << 1, 0, 0, -1).finished(); }

inline CMatrix random_hermitian(Index d, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(n(rng), n(rng));
  return scale * 0.5 * (a + a.adjoint());
}

inline CMatrix random_frame(Index d, Index l, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix a(d, l);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < l; ++j) a(i, j) = Complex(n(rng), n(rng));
  return orthonormalize_frame(a).columns();
}

inline Scenario make(Index dim, double duration, std::vector<HamiltonianTerm> terms, const CMatrix& frame,
                     std::size_t steps = kDefaultSteps) {
  Scenario s;
  s.hamiltonian = {dim, duration, std::move(terms)};
  s.initial_frame = Frame(frame);
  s.steps = steps;
  return s;
}

/// Constant H, frame = two of its eigenvectors.
inline Scenario stationary(std::size_t steps = kDefaultSteps) {
  std::mt19937 rng(11);
  const CMatrix h = random_hermitian(3, rng);
  const HermitianEigen eig = hermitian_eigen(h);
  CMatrix frame(3, 2);
  frame << eig.vectors.col(0), eig.vectors.col(2);
  return make(3, 1.5, {{coefficient::Constant{1.0}, h}}, frame, steps);
}

/// H = (omega/2) sigma_z over one period, spin tilted by theta.
inline Scenario spin_precession(double theta, double omega = 1.0, std::size_t steps = kDefaultSteps) {
  CMatrix frame(2, 1);
  frame << std::cos(theta / 2), std::sin(theta / 2);
  return make(2, 2.0 * kPi / omega, {{coefficient::Constant{omega / 2}, pauli_z()}}, frame, steps);
}

inline CMatrix gate_hamiltonian(double e0, double e1, double e2) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = e0;
  h(1, 1) = e1;
  h(2, 2) = e2;
  return h;
}

inline GateDesign worked_gate(PulseShape profile = PulseShape::constant) {
  return design_one_parameter_gate(gate_hamiltonian(0, 1, 3), 1, 1, 0.0, 0.0, profile);
}

/// H(t) = R H0 R^dag + Omega G with R = exp(-i Omega t G), G = diag(0, 1, 2),
/// Omega = 2 pi / T, frame = eigenvectors {0, 2} of H0.  The rotating-frame
/// picture makes the evolution cyclic while A and K fail to commute.
inline Scenario rotating_loop(std::size_t steps = kDefaultSteps, double scale = 0.5, unsigned seed = 7) {
  std::mt19937 rng(seed);
  const CMatrix h0 = random_hermitian(3, rng, scale);
  const double T = 2.0;
  const double omega = 2.0 * kPi / T;
  std::vector<HamiltonianTerm> terms;
  CMatrix diag = CMatrix::Zero(3, 3);
  for (Index a = 0; a < 3; ++a) diag(a, a) = h0(a, a).real() + omega * static_cast<double>(a);
  terms.push_back({coefficient::Constant{1.0}, diag});
  for (Index a = 0; a < 3; ++a) {
    for (Index b = a + 1; b < 3; ++b) {
      const double freq = omega * static_cast<double>(b - a);
      CMatrix mc = CMatrix::Zero(3, 3);
      CMatrix ms = CMatrix::Zero(3, 3);
      mc(a, b) = h0(a, b);
      mc(b, a) = std::conj(h0(a, b));
      ms(a, b) = I * h0(a, b);
      ms(b, a) = std::conj(I * h0(a, b));
      terms.push_back({coefficient::Sinusoid{1.0, freq, kPi / 2, 0.0}, mc});
      terms.push_back({coefficient::Sinusoid{1.0, freq, 0.0, 0.0}, ms});
    }
  }
  const HermitianEigen eig = hermitian_eigen(h0);
  CMatrix frame(3, 2);
  frame << eig.vectors.col(0), eig.vectors.col(2);
  return make(3, T, std::move(terms), frame, steps);
}

/// H0 + cos(1.3 t) H1 + sin(0.7 t) H2 with a random rank-l frame; not cyclic.
inline Scenario random_smooth(Index dim = 3, Index rank = 2, double duration = 2.0,
                              std::size_t steps = kDefaultSteps, unsigned seed = 1) {
  std::mt19937 rng(seed);
  const CMatrix h0 = random_hermitian(dim, rng, 0.5);
  const CMatrix h1 = random_hermitian(dim, rng, 0.5);
  const CMatrix h2 = random_hermitian(dim, rng, 0.5);
  return make(dim, duration,
              {{coefficient::Constant{1.0}, h0},
               {coefficient::Sinusoid{1.0, 1.3, kPi / 2, 0.0}, h1},
               {coefficient::Sinusoid{1.0, 0.7, 0.0, 0.0}, h2}},
              random_frame(dim, rank, rng), steps);
}

/// Restriction of a spec with only constant and sinusoid terms to
/// [t0, t0 + duration], re-based to start at 0.
inline HamiltonianSpec shifted(const HamiltonianSpec& spec, double t0, double duration) {
  HamiltonianSpec out = spec;
  out.duration = duration;
  for (auto& term : out.terms) {
    if (auto* s = std::get_if<coefficient::Sinusoid>(&term.coefficient)) s->phase += s->frequency * t0;
  }
  return out;
}

/// -E0 cos(2 pi t / tau) sigma_z + Delta sigma_x + Dy sin(2 pi t / tau) sigma_y,
/// ground state of H(0), one sweep period tau.
inline Scenario adiabatic_sweep(double tau, std::size_t steps = kDefaultSteps, double e0 = 1.0,
                                double delta = 1.0, double dy = 1.0) {
  const double w = 2.0 * kPi / tau;
  HamiltonianSpec spec{2, tau,
                       {{coefficient::Sinusoid{-e0, w, kPi / 2, 0.0}, pauli_z()},
                        {coefficient::Constant{delta}, pauli_x()},
                        {coefficient::Sinusoid{dy, w, 0.0, 0.0}, pauli_y()}}};
  const HermitianEigen eig = hermitian_eigen(eval_hamiltonian(spec, 0.0));
  Scenario s;
  s.hamiltonian = spec;
  s.initial_frame = Frame(CMatrix(eig.vectors.col(0)));
  s.steps = steps;
  return s;
}

inline double wrapped_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

}  // namespace fixtures
