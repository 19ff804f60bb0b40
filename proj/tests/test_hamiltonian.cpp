#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "holosep/errors.hpp"
#include "holosep/hamiltonian.hpp"
#include "holosep/scenario.hpp"

#include <string>

using namespace holosep;
using namespace fixtures;

namespace {

const char* kMinimal = R"({
  "dim": 2, "duration": 1.0,
  "terms": [{"coefficient": {"kind": "constant", "value": 0.5},
             "matrix": {"re": [[1, 0], [0, -1]], "im": [[0, 0], [0, 0]]}}],
  "initial_frame": {"re": [[1], [0]], "im": [[0], [0]]}
})";

}  // namespace

TEST_CASE("coefficient functions") {
  CHECK(evaluate(coefficient::Constant{2.5}, 0.3) == 2.5);
  CHECK(evaluate(coefficient::Linear{1.0, 2.0}, 0.25) == 1.5);
  CHECK(evaluate(coefficient::Sinusoid{2.0, 1.0, 0.0, 0.5}, kPi / 2) == doctest::Approx(2.5));
  const coefficient::SmoothstepRamp ramp{1.0, 3.0, 0.2, 0.6};
  CHECK(evaluate(ramp, 0.0) == 1.0);
  CHECK(evaluate(ramp, 0.4) == doctest::Approx(2.0));
  CHECK(evaluate(ramp, 1.0) == 3.0);
  const coefficient::PiecewiseConstant pw{{0.5}, {1.0, -1.0}};
  CHECK(evaluate(pw, 0.49) == 1.0);
  CHECK(evaluate(pw, 0.5) == -1.0);

  CHECK_THROWS_AS(validate_coefficient(coefficient::PiecewiseConstant{{0.6, 0.4}, {1, 2, 3}}, 1.0), ValidationError);
  CHECK_THROWS_AS(validate_coefficient(coefficient::PiecewiseConstant{{0.5}, {1}}, 1.0), ValidationError);
  CHECK_THROWS_AS(validate_coefficient(coefficient::PiecewiseConstant{{1.5}, {1, 2}}, 1.0), ValidationError);
}

TEST_CASE("eval_hamiltonian") {
  std::mt19937 rng(21);
  const CMatrix h0 = random_hermitian(3, rng);
  const HamiltonianSpec single{3, 2.0, {{coefficient::Constant{1.0}, h0}}};
  CHECK(eval_hamiltonian(single, 0.7) == h0);

  const CMatrix g = gate_hamiltonian(0, 1, 3);
  const HamiltonianSpec sine{3, kPi, {{coefficient::Sinusoid{1.0, 1.0, 0.0, 0.0}, g}}};
  CHECK((eval_hamiltonian(sine, kPi / 2) - g).norm() < 1e-15);

  const CMatrix h1 = random_hermitian(3, rng);
  const HamiltonianTerm a{coefficient::Linear{0.3, -1.1}, h0};
  const HamiltonianTerm b{coefficient::Sinusoid{0.7, 2.0, 0.1, 0.0}, h1};
  const HamiltonianSpec both{3, 2.0, {a, b}};
  for (int k = 0; k <= 4; ++k) {
    const double t = 0.5 * k;
    const CMatrix oracle = (0.3 - 1.1 * t) * h0 + (0.7 * std::sin(2.0 * t + 0.1)) * h1;
    CHECK((eval_hamiltonian(both, t) - oracle).norm() < 1e-14);
    const CMatrix sum = eval_hamiltonian({3, 2.0, {a}}, t) + eval_hamiltonian({3, 2.0, {b}}, t);
    CHECK((eval_hamiltonian(both, t) - sum).norm() < 1e-14);
    CHECK(hermiticity_defect(eval_hamiltonian(both, t)) < 1e-12);
  }

  CHECK_THROWS_AS(eval_hamiltonian(both, 2.1), DomainError);
  CHECK_THROWS_AS(eval_hamiltonian(both, -0.1), DomainError);
}

TEST_CASE("validate names the offending term") {
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  const HamiltonianSpec spec{2, 1.0, {{coefficient::Constant{1.0}, pauli_z()}, {coefficient::Constant{1.0}, bad}}};
  try {
    validate(spec);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("term 1") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(HamiltonianSpec{2, 1.0, {}}), ValidationError);
}

TEST_CASE("spectral_decompose") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(2, 2) = 1.0;
  const SpectralDecomposition s = spectral_decompose(d);
  CHECK(s.energies(0) == 0.0);
  CHECK(s.energies(1) == 1.0);
  CHECK(s.energies(2) == 3.0);
  CHECK(std::abs(s.vectors(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(s.vectors(2, 1) - 1.0) < 1e-15);
  CHECK(std::abs(s.vectors(0, 2) - 1.0) < 1e-15);

  const SpectralDecomposition x = spectral_decompose(pauli_x());
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(x.energies(0) == doctest::Approx(-1.0));
  CHECK(x.energies(1) == doctest::Approx(1.0));
  CHECK(std::abs(x.vectors(0, 0) - r) < 1e-15);
  CHECK(std::abs(x.vectors(1, 0) + r) < 1e-15);
  CHECK(std::abs(x.vectors(0, 1) - r) < 1e-15);
  CHECK(std::abs(x.vectors(1, 1) - r) < 1e-15);

  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix h = random_hermitian(4, rng);
    const SpectralDecomposition sd = spectral_decompose(h);
    const CMatrix rebuilt = sd.vectors * sd.energies.cast<Complex>().asDiagonal() * sd.vectors.adjoint();
    CHECK((rebuilt - h).norm() < 1e-10);
    CHECK(unitarity_defect(sd.vectors) < 1e-10);

    const HamiltonianSpec shifted = with_identity_shift({4, 1.0, {{coefficient::Constant{1.0}, h}}},
                                                        coefficient::Constant{-sd.energies(0)});
    const SpectralDecomposition moved = spectral_decompose(eval_hamiltonian(shifted, 0.0));
    CHECK((moved.energies.array() - (sd.energies.array() - sd.energies(0))).abs().maxCoeff() < 1e-12);
    CHECK((moved.vectors - sd.vectors).norm() < 1e-10);
  }

  CHECK_THROWS_AS(spectral_decompose(CMatrix::Identity(2, 3)), ValidationError);
}

TEST_CASE("time_reversed evaluates -H(T - t)") {
  const Scenario s = random_smooth();
  HamiltonianSpec spec = s.hamiltonian;
  spec.terms.push_back({coefficient::Linear{0.2, 0.4}, gate_hamiltonian(1, 2, 3)});
  spec.terms.push_back({coefficient::SmoothstepRamp{0.0, 1.0, 0.5, 1.5}, CMatrix::Identity(3, 3)});
  spec.terms.push_back({coefficient::PiecewiseConstant{{0.5, 1.25}, {1.0, 2.0, 3.0}}, CMatrix::Identity(3, 3)});
  const HamiltonianSpec rev = time_reversed(spec);
  for (double t : {0.0, 0.1, 0.6, 1.3, 1.7, 2.0}) {
    CHECK((eval_hamiltonian(rev, t) + eval_hamiltonian(spec, spec.duration - t)).norm() < 1e-12);
  }
}

TEST_CASE("parse_scenario: minimal document") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.hamiltonian.dim == 2);
  CHECK(s.steps == kDefaultSteps);
  CHECK(s.tolerances == Tolerances{});
  CHECK(s.initial_frame.rank() == 1);
  CHECK(s.frame_adjustment == 0.0);
  CHECK(parse_scenario(kMinimal, 512).steps == 512);
}

TEST_CASE("parse_scenario: schema errors carry the field path") {
  auto path_of = [](const std::string& text) {
    try {
      (void)parse_scenario(text);
    } catch (const ParseError& e) {
      return e.path();
    }
    return std::string("<no error>");
  };
  std::string upper = kMinimal;
  upper.replace(upper.find("[[1, 0], [0, -1]]"), 17, "[[1, 0], [-1]]");
  CHECK(path_of(upper) == "terms[0].matrix.re[1]");

  std::string unknown = kMinimal;
  unknown.replace(unknown.find("\"value\""), 7, "\"valu\"");
  CHECK(path_of(unknown) == "terms[0].coefficient.valu");

  std::string kind = kMinimal;
  kind.replace(kind.find("constant"), 8, "cubic");
  CHECK(path_of(kind) == "terms[0].coefficient.kind");

  CHECK(path_of("{\"dim\": 2") == "");
  CHECK(path_of(R"({"dim": 2, "duration": 1.0, "terms": []})") == "terms");

  try {
    (void)parse_scenario(upper);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("given in full") != std::string::npos);
  }
}

TEST_CASE("parse_scenario: validation of terms and frame") {
  std::string nonherm = kMinimal;
  nonherm.replace(nonherm.find("\"im\": [[0, 0], [0, 0]]"), 22, "\"im\": [[0, 1], [1, 0]]");
  CHECK_THROWS_AS(parse_scenario(nonherm), ValidationError);

  std::string skew = kMinimal;
  skew.replace(skew.find("\"re\": [[1], [0]]"), 16, "\"re\": [[1], [0.01]]");
  CHECK_THROWS_AS(parse_scenario(skew), ValidationError);

  std::string slight = kMinimal;
  slight.replace(slight.find("\"re\": [[1], [0]]"), 16, "\"re\": [[1.0000001], [0]]");
  const Scenario s = parse_scenario(slight);
  CHECK(s.frame_adjustment == doctest::Approx(1e-7).epsilon(1e-3));
  CHECK(unitarity_defect(s.initial_frame.columns()) < 1e-15);
}

TEST_CASE("scenario round trip and digest") {
  for (PulseShape p : {PulseShape::constant, PulseShape::sine, PulseShape::linear, PulseShape::smoothstep}) {
    const Scenario s = worked_gate(p).scenario;
    const Scenario back = parse_scenario(serialize_scenario(s));
    CHECK(back == s);
    CHECK(scenario_digest(back) == scenario_digest(s));
  }
  const Scenario r = rotating_loop();
  CHECK(parse_scenario(serialize_scenario(r, false)) == r);

  const Scenario a = parse_scenario(kMinimal);
  std::string spaced = kMinimal;
  spaced.insert(1, "\n\n   ");
  CHECK(scenario_digest(parse_scenario(spaced)) == scenario_digest(a));
  std::string reordered = R"({"initial_frame": {"im": [[0], [0]], "re": [[1], [0]]}, "duration": 1.0, "dim": 2,
    "steps": 4096, "terms": [{"matrix": {"re": [[1, 0], [0, -1]], "im": [[0, 0], [0, 0]]},
                              "coefficient": {"value": 0.5, "kind": "constant"}}]})";
  CHECK(scenario_digest(parse_scenario(reordered)) == scenario_digest(a));

  Scenario changed = a;
  changed.steps = 2048;
  CHECK(scenario_digest(changed) != scenario_digest(a));
  changed = a;
  changed.tolerances.residual = 2e-6;
  CHECK(scenario_digest(changed) != scenario_digest(a));
  changed = a;
  changed.hamiltonian.terms[0].coefficient = coefficient::Constant{0.5000000000000001};
  CHECK(scenario_digest(changed) != scenario_digest(a));
}
