#include "holosep/hamiltonian.hpp"

#include "holosep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace holosep {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

bool finite(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

double evaluate(const CoefficientFunction& c, double t) {
  return std::visit(
      Overloaded{
          [](const coefficient::Constant& k) { return k.value; },
          [t](const coefficient::Linear& k) { return k.offset + k.slope * t; },
          [t](const coefficient::Sinusoid& k) {
            return k.amplitude * std::sin(k.frequency * t + k.phase) + k.offset;
          },
          [t](const coefficient::SmoothstepRamp& k) {
            if (t <= k.start) return k.from;
            if (t >= k.end) return k.to;
            return k.from + (k.to - k.from) * smoothstep((t - k.start) / (k.end - k.start));
          },
          [t](const coefficient::PiecewiseConstant& k) {
            const auto it = std::upper_bound(k.breakpoints.begin(), k.breakpoints.end(), t);
            return k.values[static_cast<std::size_t>(it - k.breakpoints.begin())];
          },
      },
      c);
}

std::string_view kind_name(const CoefficientFunction& c) {
  return std::visit(Overloaded{
                        [](const coefficient::Constant&) { return std::string_view("constant"); },
                        [](const coefficient::Linear&) { return std::string_view("linear"); },
                        [](const coefficient::Sinusoid&) { return std::string_view("sinusoid"); },
                        [](const coefficient::SmoothstepRamp&) {
                          return std::string_view("smoothstep-ramp");
                        },
                        [](const coefficient::PiecewiseConstant&) {
                          return std::string_view("piecewise-constant");
                        },
                    },
                    c);
}

void validate_coefficient(const CoefficientFunction& c, double duration) {
  std::visit(
      Overloaded{
          [](const coefficient::Constant& k) {
            if (!finite({k.value})) throw ValidationError("constant: non-finite value");
          },
          [](const coefficient::Linear& k) {
            if (!finite({k.offset, k.slope})) throw ValidationError("linear: non-finite parameter");
          },
          [](const coefficient::Sinusoid& k) {
            if (!finite({k.amplitude, k.frequency, k.phase, k.offset})) {
              throw ValidationError("sinusoid: non-finite parameter");
            }
          },
          [](const coefficient::SmoothstepRamp& k) {
            if (!finite({k.from, k.to, k.start, k.end})) {
              throw ValidationError("smoothstep-ramp: non-finite parameter");
            }
            if (!(k.end > k.start)) throw ValidationError("smoothstep-ramp: need start < end");
          },
          [duration](const coefficient::PiecewiseConstant& k) {
            if (k.values.size() != k.breakpoints.size() + 1) {
              throw ValidationError("piecewise-constant: need exactly one more value than breakpoints");
            }
            for (std::size_t i = 0; i < k.breakpoints.size(); ++i) {
              const double b = k.breakpoints[i];
              if (!std::isfinite(b) || b < 0.0 || b > duration) {
                throw ValidationError("piecewise-constant: breakpoint outside [0, duration]");
              }
              if (i > 0 && !(b > k.breakpoints[i - 1])) {
                throw ValidationError("piecewise-constant: breakpoints must be strictly increasing");
              }
            }
            for (double v : k.values) {
              if (!std::isfinite(v)) throw ValidationError("piecewise-constant: non-finite value");
            }
          },
      },
      c);
}

void validate(const HamiltonianSpec& spec) {
  if (spec.dim < 1) throw ValidationError("hamiltonian: dim must be positive");
  if (!(spec.duration > 0.0) || !std::isfinite(spec.duration)) {
    throw ValidationError("hamiltonian: duration must be positive");
  }
  if (spec.terms.empty()) throw ValidationError("hamiltonian: at least one term required");
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    const auto& term = spec.terms[k];
    const std::string name = "term " + std::to_string(k);
    if (term.matrix.rows() != spec.dim || term.matrix.cols() != spec.dim) {
      throw ValidationError(name + ": matrix must be " + std::to_string(spec.dim) + "x" +
                            std::to_string(spec.dim));
    }
    if (!all_finite(term.matrix)) throw ValidationError(name + ": non-finite matrix entries");
    const double defect = hermiticity_defect(term.matrix);
    if (defect > 1e-12) {
      throw ValidationError(name + ": matrix is not Hermitian (||H - H^dag|| = " +
                            std::to_string(defect) + ")");
    }
    try {
      validate_coefficient(term.coefficient, spec.duration);
    } catch (const ValidationError& e) {
      throw ValidationError(name + ": " + e.what());
    }
  }
}

CMatrix eval_hamiltonian(const HamiltonianSpec& spec, double t) {
  const double slack = 1e-12 * spec.duration;
  if (!(t >= -slack && t <= spec.duration + slack)) {
    throw DomainError("eval_hamiltonian: t = " + std::to_string(t) + " outside [0, " +
                      std::to_string(spec.duration) + "]");
  }
  CMatrix h = CMatrix::Zero(spec.dim, spec.dim);
  for (const auto& term : spec.terms) h += evaluate(term.coefficient, t) * term.matrix;
  return 0.5 * (h + h.adjoint());
}

SpectralDecomposition spectral_decompose(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw ValidationError("spectral_decompose: expected a square matrix");
  }
  if (hermiticity_defect(h) > 1e-10) throw ValidationError("spectral_decompose: not Hermitian");
  auto eig = hermitian_eigen(h);
  return {std::move(eig.values), std::move(eig.vectors)};
}

HamiltonianSpec time_reversed(const HamiltonianSpec& spec) {
  const double T = spec.duration;
  HamiltonianSpec out = spec;
  for (auto& term : out.terms) {
    term.coefficient = std::visit(
        Overloaded{
            [](const coefficient::Constant& k) -> CoefficientFunction {
              return coefficient::Constant{-k.value};
            },
            [T](const coefficient::Linear& k) -> CoefficientFunction {
              return coefficient::Linear{-k.offset - k.slope * T, k.slope};
            },
            [T](const coefficient::Sinusoid& k) -> CoefficientFunction {
              // -(A sin(w (T - t) + p) + o) = A sin(w t - w T - p) - o
              return coefficient::Sinusoid{k.amplitude, k.frequency, -k.frequency * T - k.phase,
                                           -k.offset};
            },
            [T](const coefficient::SmoothstepRamp& k) -> CoefficientFunction {
              return coefficient::SmoothstepRamp{-k.to, -k.from, T - k.end, T - k.start};
            },
            [T](const coefficient::PiecewiseConstant& k) -> CoefficientFunction {
              coefficient::PiecewiseConstant r;
              r.breakpoints.assign(k.breakpoints.rbegin(), k.breakpoints.rend());
              for (double& b : r.breakpoints) b = T - b;
              r.values.assign(k.values.rbegin(), k.values.rend());
              for (double& v : r.values) v = -v;
              return r;
            },
        },
        term.coefficient);
  }
  return out;
}

HamiltonianSpec with_identity_shift(HamiltonianSpec spec, CoefficientFunction c) {
  spec.terms.push_back({std::move(c), CMatrix::Identity(spec.dim, spec.dim)});
  return spec;
}

}  // namespace holosep
