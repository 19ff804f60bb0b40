#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "holosep/errors.hpp"
#include "holosep/linalg.hpp"

#include <Eigen/SVD>

using namespace holosep;
using fixtures::I;

namespace {

CMatrix taylor_exp(const CMatrix& m, int terms = 30) {
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  CMatrix term = out;
  for (int k = 1; k < terms; ++k) {
    term = term * m / static_cast<double>(k);
    out += term;
  }
  return out;
}

CMatrix random_antihermitian(Index d, std::mt19937& rng, double radius) {
  const CMatrix h = fixtures::random_hermitian(d, rng);
  const double r = hermitian_eigen(h).values.cwiseAbs().maxCoeff();
  return I * h * (radius / r);
}

CMatrix random_unitary(Index d, std::mt19937& rng) { return expm_antihermitian(random_antihermitian(d, rng, 2.5)); }

CMatrix random_matrix(Index r, Index c, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix a(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) a(i, j) = Complex(n(rng), n(rng));
  return a;
}

}  // namespace

TEST_CASE("expm_antihermitian") {
  CHECK((expm_antihermitian(CMatrix::Zero(2, 2)) - CMatrix::Identity(2, 2)).norm() < 1e-15);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = I * kPi;
  d(1, 1) = -I * kPi;
  CHECK((expm_antihermitian(d) + CMatrix::Identity(2, 2)).norm() < 1e-14);

  const double theta = 0.3;
  CMatrix rot(2, 2);
  rot << 0, theta, -theta, 0;
  const CMatrix e = expm_antihermitian(rot);
  CHECK((e - taylor_exp(rot)).norm() < 1e-14);
  CHECK(e(0, 0).real() == doctest::Approx(std::cos(theta)).epsilon(1e-14));
  CHECK(e(0, 1).real() == doctest::Approx(std::sin(theta)).epsilon(1e-14));

  CHECK_THROWS_AS(expm_antihermitian(CMatrix::Identity(2, 2)), ValidationError);
  CHECK_THROWS_AS(expm_antihermitian(CMatrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("expm_antihermitian is unitary on random inputs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = random_antihermitian(1 + trial % 6, rng, 10.0);
    CHECK(unitarity_defect(expm_antihermitian(m)) < 1e-12);
  }
}

TEST_CASE("logm_unitary_principal") {
  CHECK(logm_unitary_principal(CMatrix::Identity(3, 3)).value.norm() < 1e-15);

  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::exp(I * (kPi / 3));
  u(1, 1) = std::exp(-I * (kPi / 4));
  const UnitaryLog log = logm_unitary_principal(u);
  CHECK(std::abs(log.value(0, 0) - I * (kPi / 3)) < 1e-14);
  CHECK(std::abs(log.value(1, 1) + I * (kPi / 4)) < 1e-14);
  CHECK_FALSE(log.near_branch_cut);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix l = random_antihermitian(2 + trial % 4, rng, 3.0);
    const UnitaryLog back = logm_unitary_principal(expm_antihermitian(l));
    CHECK((back.value - l).norm() < 1e-10);
    CHECK(antihermiticity_defect(back.value) < 1e-12);
  }
}

TEST_CASE("logm flags and shifts the branch cut") {
  CMatrix u = CMatrix::Identity(2, 2);
  u(1, 1) = -1.0;
  const UnitaryLog log = logm_unitary_principal(u);
  CHECK(log.near_branch_cut);
  CHECK(std::abs(log.value(1, 1) - I * kPi) < 1e-12);

  const UnitaryLog shifted = logm_unitary_principal(u, 1e-3);
  CHECK(shifted.branch_offset == 1e-3);
  CHECK((expm_antihermitian(shifted.value) - u).norm() < 1e-12);

  CMatrix near = CMatrix::Identity(2, 2);
  near(1, 1) = std::exp(I * (kPi - 1e-7));
  CHECK(logm_unitary_principal(near).near_branch_cut);
  near(1, 1) = std::exp(I * (kPi - 1e-4));
  CHECK_FALSE(logm_unitary_principal(near).near_branch_cut);

  CHECK_THROWS_AS(logm_unitary_principal(2.0 * CMatrix::Identity(2, 2)), ValidationError);
}

TEST_CASE("polar_unitary_factor") {
  std::mt19937 rng(9);
  const CMatrix u = random_unitary(3, rng);
  CHECK((polar_unitary_factor(u) - u).norm() < 1e-12);
  CHECK((polar_unitary_factor(2.0 * CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_matrix(4, 4, rng) + 3.0 * CMatrix::Identity(4, 4);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix oracle = svd.matrixU() * svd.matrixV().adjoint();
    const CMatrix q = polar_unitary_factor(a);
    CHECK((q - oracle).norm() < 1e-10);

    // Left factors that are positive-definite Hermitian leave the unitary
    // factor of a unitary input unchanged.
    const CMatrix b = random_matrix(4, 4, rng);
    const CMatrix pd = b * b.adjoint() + CMatrix::Identity(4, 4);
    const CMatrix w = random_unitary(4, rng);
    CHECK((polar_unitary_factor(w * pd) - w).norm() < 1e-10);
  }

  CMatrix singular = CMatrix::Identity(2, 2);
  singular(1, 1) = 0.0;
  CHECK_THROWS_AS(polar_unitary_factor(singular), SingularityError);
}

TEST_CASE("orthonormalize_frame") {
  std::mt19937 rng(13);
  const CMatrix q = fixtures::random_frame(4, 2, rng);
  CHECK((orthonormalize_frame(q).columns() - q).norm() < 1e-12);

  CMatrix e1 = CMatrix::Zero(3, 1);
  e1(0, 0) = 2.0;
  const Frame f = orthonormalize_frame(e1);
  CHECK(std::abs(f.columns()(0, 0) - 1.0) < 1e-15);
  CHECK(f.columns().bottomRows(2).norm() == 0.0);

  const CMatrix a = random_matrix(4, 2, rng);
  const Frame v = orthonormalize_frame(a);
  CHECK(unitarity_defect(v.columns()) < 1e-12);
  const CMatrix gram_projector = a * (a.adjoint() * a).inverse() * a.adjoint();
  CHECK((projector_from_frame(v).matrix() - gram_projector).norm() < 1e-10);
  const CMatrix r = v.columns().adjoint() * a;
  for (Index i = 0; i < 2; ++i) {
    CHECK(r(i, i).real() > 0.0);
    CHECK(std::abs(r(i, i).imag()) < 1e-12);
  }

  CMatrix dependent(3, 2);
  dependent << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(orthonormalize_frame(dependent), RankError);
}

TEST_CASE("Frame and Projector invariants") {
  CMatrix bad(2, 1);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(Frame{bad}, ValidationError);

  CMatrix e1 = CMatrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK(projector_from_frame(Frame(e1)).matrix() == expected);

  CHECK((projector_from_frame(Frame(CMatrix::Identity(3, 3))).matrix() - CMatrix::Identity(3, 3)).norm() < 1e-15);

  CMatrix v = CMatrix::Zero(3, 2);
  v(0, 0) = v(1, 0) = 1.0 / std::sqrt(2.0);
  v(2, 1) = 1.0;
  const Projector p = projector_from_frame(Frame(v));
  CMatrix block = CMatrix::Zero(3, 3);
  block.topLeftCorner(2, 2).setConstant(0.5);
  block(2, 2) = 1.0;
  CHECK((p.matrix() - block).norm() < 1e-15);
  CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-15);
  CHECK(p.trace() == doctest::Approx(2.0));

  std::mt19937 rng(17);
  const CMatrix f = fixtures::random_frame(4, 2, rng);
  const CMatrix w = random_unitary(2, rng);
  CHECK((projector_from_frame(Frame(f)).matrix() - projector_from_frame(Frame(f * w)).matrix()).norm() < 1e-12);

  CHECK_THROWS_AS(Projector(CMatrix::Identity(2, 2) * 0.5), ValidationError);
}

TEST_CASE("hermitian_eigen sort and phase convention") {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = 3.0;
  h(2, 2) = 1.0;
  const HermitianEigen e = hermitian_eigen(h);
  CHECK(e.values(0) == 0.0);
  CHECK(e.values(1) == 1.0);
  CHECK(e.values(2) == 3.0);
  CHECK(std::abs(e.vectors(1, 0) - 1.0) < 1e-15);
  CHECK(std::abs(e.vectors(2, 1) - 1.0) < 1e-15);
  CHECK(std::abs(e.vectors(0, 2) - 1.0) < 1e-15);
}

TEST_CASE("wrap_phase") {
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_phase(0.25) == 0.25);
}
