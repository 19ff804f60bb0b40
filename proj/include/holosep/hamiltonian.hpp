#pragma once

// Time-dependent Hamiltonians H(t) = sum_k c_k(t) H_k in units with hbar = 1.

#include "holosep/linalg.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace holosep {

namespace coefficient {

struct Constant {
  double value = 0.0;
  friend bool operator==(const Constant&, const Constant&) = default;
};

/// offset + slope * t
struct Linear {
  double offset = 0.0;
  double slope = 0.0;
  friend bool operator==(const Linear&, const Linear&) = default;
};

/// amplitude * sin(frequency * t + phase) + offset
struct Sinusoid {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double offset = 0.0;
  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

/// Holds `from` before `start`, `to` after `end`, and blends with
/// 3x^2 - 2x^3 in between.
struct SmoothstepRamp {
  double from = 0.0;
  double to = 0.0;
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const SmoothstepRamp&, const SmoothstepRamp&) = default;
};

/// values[j] on [breakpoints[j-1], breakpoints[j]) with the outer intervals
/// open-ended; right-continuous at each breakpoint.
struct PiecewiseConstant {
  std::vector<double> breakpoints;
  std::vector<double> values;
  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;
};

}  // namespace coefficient

using CoefficientFunction =
    std::variant<coefficient::Constant, coefficient::Linear, coefficient::Sinusoid,
                 coefficient::SmoothstepRamp, coefficient::PiecewiseConstant>;

double evaluate(const CoefficientFunction& c, double t);

/// Wire name of the coefficient kind ("constant", "linear", "sinusoid",
/// "smoothstep-ramp", "piecewise-constant").
std::string_view kind_name(const CoefficientFunction& c);

/// Throws ValidationError for breakpoints that are not strictly increasing
/// inside [0, duration], mismatched value counts, or non-finite parameters.
void validate_coefficient(const CoefficientFunction& c, double duration);

struct HamiltonianTerm {
  CoefficientFunction coefficient;
  CMatrix matrix;  // Hermitian, dim x dim

  friend bool operator==(const HamiltonianTerm& a, const HamiltonianTerm& b) {
    return a.coefficient == b.coefficient && a.matrix == b.matrix;
  }
};

struct HamiltonianSpec {
  Index dim = 0;
  double duration = 0.0;  // evaluation domain [0, duration]
  std::vector<HamiltonianTerm> terms;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;
};

/// Checks dimensions, Hermiticity of every term (1e-12) and coefficient
/// validity; the error message names the offending term.
void validate(const HamiltonianSpec& spec);

/// sum_k c_k(t) H_k.  Throws DomainError for t outside [0, duration].
CMatrix eval_hamiltonian(const HamiltonianSpec& spec, double t);

struct SpectralDecomposition {
  RVector energies;  // ascending
  CMatrix vectors;   // orthonormal columns
};

SpectralDecomposition spectral_decompose(const CMatrix& h);

/// The spec H'(t) = -H(T - t) on the same interval; drives the evolution
/// backwards along the same path.
HamiltonianSpec time_reversed(const HamiltonianSpec& spec);

/// Adds the term c(t) * identity.
HamiltonianSpec with_identity_shift(HamiltonianSpec spec, CoefficientFunction c);

}  // namespace holosep
