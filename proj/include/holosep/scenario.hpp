#pragma once

#include "holosep/hamiltonian.hpp"
#include "holosep/linalg.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace holosep {

inline constexpr std::size_t kDefaultSteps = 4096;

/// Pass/fail thresholds.  Defaults are calibrated for N = 4096.
struct Tolerances {
  double cyclic = 1e-6;              // ||P(T) - P(0)||_F
  double residual = 1e-6;            // separation, matrix-form, route and gauge residuals
  double parallel_transport = 1e-4;  // discrete Gamma^dag dGamma/dt
  double holonomic = 1e-6;           // ||D^dag(T) - e^{i alpha} 1||_F

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct Scenario {
  HamiltonianSpec hamiltonian;  // carries dim and duration
  Frame initial_frame = Frame::unchecked(CMatrix());
  std::size_t steps = kDefaultSteps;
  Tolerances tolerances;

  /// ||V_orthonormalized - V_given||_F of the initial frame at parse time.
  /// Not serialized and not part of equality.
  double frame_adjustment = 0.0;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.hamiltonian == b.hamiltonian && a.initial_frame == b.initial_frame &&
           a.steps == b.steps && a.tolerances == b.tolerances;
  }
};

/// Parses and validates a scenario document.
///
/// Schema errors raise ParseError carrying the JSON path of the offending
/// field.  Non-Hermitian terms raise ValidationError naming the term.  An
/// initial frame off orthonormality by more than 1e-6 is rejected; between
/// 1e-14 and 1e-6 it is re-orthonormalized and the correction recorded in
/// `frame_adjustment`.  `default_steps` applies when the document has no
/// "steps" key.
Scenario parse_scenario(std::string_view text, std::size_t default_steps = kDefaultSteps);

/// Canonical text form; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s, bool pretty = true);

/// Validates a programmatically built scenario the same way parse_scenario
/// does (minus the re-orthonormalization).
void validate(const Scenario& s);

/// Hex content hash of the canonical compact serialization.  Insensitive to
/// whitespace, key order and omitted defaults in the source text.
std::string scenario_digest(const Scenario& s);

}  // namespace holosep
