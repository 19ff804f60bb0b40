#pragma once

// Dense complex linear algebra for small systems (d <= ~32).
//
// Conventions used throughout the library:
//  * Hermitian eigenvalues ascend; every eigenvector is rephased so that its
//    largest-magnitude component (first one on ties) is real positive.
//  * Phases are reduced to (-pi, pi].
//  * All residual norms are Frobenius.

#include <Eigen/Dense>

#include <complex>
#include <numbers>

namespace holosep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kDegenerateGap = 1e-10;
inline constexpr double kBranchCutDistance = 1e-6;

/// Column-orthonormal d x l array.
class Frame {
 public:
  /// Throws ValidationError unless ||V^dag V - 1||_F <= tolerance.
  explicit Frame(CMatrix columns, double tolerance = kFrameTolerance);

  /// Wraps columns produced by an orthonormality-preserving computation.
  static Frame unchecked(CMatrix columns);

  Index dim() const { return columns_.rows(); }
  Index rank() const { return columns_.cols(); }
  const CMatrix& columns() const { return columns_; }
  auto column(Index i) const { return columns_.col(i); }

  friend bool operator==(const Frame& a, const Frame& b) { return a.columns_ == b.columns_; }

 private:
  struct UncheckedTag {};
  Frame(UncheckedTag, CMatrix columns) : columns_(std::move(columns)) {}
  CMatrix columns_;
};

/// Rank-l orthogonal projector V V^dag.
class Projector {
 public:
  explicit Projector(CMatrix matrix);
  const CMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  CMatrix matrix_;
};

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, phase convention applied
};

struct UnitaryLog {
  CMatrix value;                  // anti-Hermitian, exp(value) == input
  bool near_branch_cut = false;   // some eigenvalue within 1e-6 of -1
  double branch_offset = 0.0;     // eigen-phases lie in (-pi + offset, pi + offset]
};

double hermiticity_defect(const CMatrix& m);
double antihermiticity_defect(const CMatrix& m);
double unitarity_defect(const CMatrix& m);
bool all_finite(const CMatrix& m);

/// Reduces an angle to (-pi, pi].
double wrap_phase(double angle);

/// Eigen-decomposition of a Hermitian matrix with the library's sort and
/// phase convention.
HermitianEigen hermitian_eigen(const CMatrix& h);

/// exp(M) for anti-Hermitian M, through the eigen-decomposition of iM.
CMatrix expm_antihermitian(const CMatrix& m);

/// exp(-i tau H) for Hermitian H.  Same route as expm_antihermitian, without
/// the validation overhead; used on the propagation hot path.
CMatrix unitary_exp(const CMatrix& h, double tau);

/// Principal logarithm of a unitary.  Eigen-phases are taken in
/// (-pi + branch_offset, pi + branch_offset].
UnitaryLog logm_unitary_principal(const CMatrix& u, double branch_offset = 0.0);

/// Unitary factor of the polar decomposition; the closest unitary in
/// Frobenius norm.  Throws SingularityError when the smallest singular value
/// is <= 1e-12.
CMatrix polar_unitary_factor(const CMatrix& m);

/// QR-style orthonormalization with a real positive R diagonal.  Throws
/// RankError when the smallest singular value is <= 1e-10.
Frame orthonormalize_frame(const CMatrix& columns);

Projector projector_from_frame(const Frame& frame);

}  // namespace holosep
