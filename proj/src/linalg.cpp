#include "holosep/linalg.hpp"

#include "holosep/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace holosep {
namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Largest-magnitude component real positive; ties go to the lowest index.
void fix_phase(Eigen::Ref<CVector> v) {
  double best = 0.0;
  for (Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
  if (best == 0.0) return;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= best * (1.0 - 1e-9)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

CMatrix hermitian_part(const CMatrix& h) { return 0.5 * (h + h.adjoint()); }

}  // namespace

Frame::Frame(CMatrix columns, double tolerance) : columns_(std::move(columns)) {
  if (columns_.rows() == 0 || columns_.cols() == 0 || columns_.cols() > columns_.rows()) {
    throw ValidationError("frame: need 1 <= rank <= dim, got " + std::to_string(columns_.rows()) +
                          "x" + std::to_string(columns_.cols()));
  }
  if (!all_finite(columns_)) throw ValidationError("frame: non-finite entries");
  const double defect = (columns_.adjoint() * columns_ -
                         CMatrix::Identity(columns_.cols(), columns_.cols()))
                            .norm();
  if (defect > tolerance) {
    throw ValidationError("frame: columns not orthonormal (||V^dag V - 1|| = " +
                          std::to_string(defect) + ")");
  }
}

Frame Frame::unchecked(CMatrix columns) { return Frame(UncheckedTag{}, std::move(columns)); }

Projector::Projector(CMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "projector");
  if (hermiticity_defect(matrix_) > 1e-12) throw ValidationError("projector: not Hermitian");
  if ((matrix_ * matrix_ - matrix_).norm() > 1e-10) {
    throw ValidationError("projector: not idempotent");
  }
  const double tr = trace();
  if (std::abs(tr - std::round(tr)) > 1e-8) {
    throw ValidationError("projector: trace is not an integer rank");
  }
}

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

double antihermiticity_defect(const CMatrix& m) { return (m + m.adjoint()).norm(); }

double unitarity_defect(const CMatrix& m) {
  return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).norm();
}

bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double wrap_phase(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  require_square(h, "hermitian_eigen");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigen: solver failed");
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  for (Index k = 0; k < out.vectors.cols(); ++k) fix_phase(out.vectors.col(k));
  return out;
}

CMatrix expm_antihermitian(const CMatrix& m) {
  require_square(m, "expm_antihermitian");
  const double defect = antihermiticity_defect(m);
  if (defect > 1e-10) {
    throw ValidationError("expm_antihermitian: ||M + M^dag|| = " + std::to_string(defect));
  }
  // M = -i H with H = i M Hermitian.
  const CMatrix h = Complex(0.0, 1.0) * m;
  return unitary_exp(h, 1.0);
}

CMatrix unitary_exp(const CMatrix& h, double tau) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h));
  const RVector& w = solver.eigenvalues();
  const CMatrix& v = solver.eigenvectors();
  CVector phases(w.size());
  for (Index k = 0; k < w.size(); ++k) phases(k) = std::polar(1.0, -tau * w(k));
  return v * phases.asDiagonal() * v.adjoint();
}

UnitaryLog logm_unitary_principal(const CMatrix& u, double branch_offset) {
  require_square(u, "logm_unitary_principal");
  const double defect = unitarity_defect(u);
  if (defect > 1e-8) {
    throw ValidationError("logm_unitary_principal: ||U^dag U - 1|| = " + std::to_string(defect));
  }
  // A unitary is normal, so its complex Schur form is diagonal up to rounding
  // and the Schur vectors are an orthonormal eigenbasis.
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalError("logm_unitary_principal: Schur failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& q = schur.matrixU();

  UnitaryLog out;
  out.branch_offset = branch_offset;
  CVector logs(t.rows());
  for (Index k = 0; k < t.rows(); ++k) {
    const Complex lambda = t(k, k);
    if (std::abs(lambda + 1.0) < kBranchCutDistance) out.near_branch_cut = true;
    double phase = std::arg(lambda);
    // Bring into (-pi + offset, pi + offset].
    while (phase <= -kPi + branch_offset) phase += 2.0 * kPi;
    while (phase > kPi + branch_offset) phase -= 2.0 * kPi;
    logs(k) = Complex(0.0, phase);
  }
  CMatrix l = q * logs.asDiagonal() * q.adjoint();
  out.value = 0.5 * (l - l.adjoint());
  return out;
}

CMatrix polar_unitary_factor(const CMatrix& m) {
  require_square(m, "polar_unitary_factor");
  if (!all_finite(m)) throw NumericalError("polar_unitary_factor: non-finite input");
  const RVector sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  if (sv(sv.size() - 1) <= 1e-12) {
    throw SingularityError("polar_unitary_factor: smallest singular value " +
                           std::to_string(sv(sv.size() - 1)));
  }
  // Scaled Newton iteration X <- (g X + X^{-dag} / g) / 2.
  CMatrix x = m;
  for (int iter = 0; iter < 100; ++iter) {
    const CMatrix inv_adj = x.inverse().adjoint();
    double g = 1.0;
    if (iter < 8) g = std::sqrt(inv_adj.norm() / x.norm());
    CMatrix next = 0.5 * (g * x + inv_adj / g);
    const double change = (next - x).norm();
    x = std::move(next);
    if (change <= 1e-15 * std::sqrt(static_cast<double>(x.rows()))) break;
  }
  return x;
}

Frame orthonormalize_frame(const CMatrix& columns) {
  if (columns.rows() == 0 || columns.cols() == 0 || columns.cols() > columns.rows()) {
    throw ValidationError("orthonormalize_frame: need 1 <= rank <= dim");
  }
  if (!all_finite(columns)) throw ValidationError("orthonormalize_frame: non-finite entries");
  const RVector sv = Eigen::JacobiSVD<CMatrix>(columns).singularValues();
  if (sv(sv.size() - 1) <= 1e-10) {
    throw RankError("orthonormalize_frame: columns are linearly dependent (smallest singular value " +
                    std::to_string(sv(sv.size() - 1)) + ")");
  }
  // Classical Gram-Schmidt with one reorthogonalization pass; the diagonal of
  // the implied R factor is the norm taken at each step, hence real positive.
  CMatrix q = columns;
  for (Index j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    q.col(j) /= q.col(j).norm();
  }
  return Frame::unchecked(std::move(q));
}

Projector projector_from_frame(const Frame& frame) {
  const CMatrix p = frame.columns() * frame.columns().adjoint();
  return Projector(0.5 * (p + p.adjoint()));
}

}  // namespace holosep
