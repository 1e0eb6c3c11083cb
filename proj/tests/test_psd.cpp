#include "conedeflate/psd.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>

using namespace conedeflate;
using testsupport::eig2x2;
using testsupport::matrix2;
using testsupport::rel_frob;
using testsupport::Rng;

namespace {

Matrix diag(std::initializer_list<double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) m(i, i) = Scalar(v, 0.0), ++i;
  return m;
}

}  // namespace

TEST_CASE("tolerance config validation") {
  ToleranceConfig tol;
  CHECK_NOTHROW(tol.validate());
  tol.psd_tol = 0.0;
  CHECK_THROWS_AS(tol.validate(), InvalidConfig);
  tol.psd_tol = 0.5;
  CHECK_THROWS_AS(tol.validate(), InvalidConfig);
  tol = ToleranceConfig{};
  tol.rank_tol = -1e-12;
  CHECK_THROWS_AS(tol.validate(), InvalidConfig);
  tol.rank_tol = 1e-12;
  CHECK_NOTHROW(tol.validate());
}

TEST_CASE("eig_hermitian on diagonal input") {
  const EigenSystem es = eig_hermitian(diag({2, 1}));
  CHECK(es.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(2.0));
  // Permutation of identity columns.
  CHECK((es.eigenvectors.col(0) - unit_basis_vector(2, 1)).norm() < 1e-14);
  CHECK((es.eigenvectors.col(1) - unit_basis_vector(2, 0)).norm() < 1e-14);
}

TEST_CASE("eig_hermitian frozen 2x2 case") {
  // Characteristic polynomial of [[1,1/2],[1/2,1]]: (1-l)^2 = 1/4.
  const Matrix a = matrix2(1, 0.5, 0.5, 1);
  const EigenSystem es = eig_hermitian(a);
  CHECK(es.eigenvalues(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(es.eigenvalues(1) == doctest::Approx(1.5).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK((es.eigenvectors.col(0) - testsupport::complexify({s, -s})).norm() <
        1e-12);
  CHECK((es.eigenvectors.col(1) - testsupport::complexify({s, s})).norm() <
        1e-12);
}

TEST_CASE("eig_hermitian zero matrix") {
  const EigenSystem es = eig_hermitian(Matrix::Zero(3, 3));
  CHECK(es.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  CHECK((es.eigenvectors - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  Matrix a = matrix2(1, 1, 0, 1);
  CHECK_THROWS_AS(eig_hermitian(a), NotHermitian);
  a = matrix2(0, 0, 0, 0);
  a(0, 1) = Scalar(0, 1e-3);
  a(1, 0) = Scalar(0, 1e-3);  // equal, but conj(a10) != a01
  CHECK_THROWS_AS(eig_hermitian(a), NotHermitian);
}

TEST_CASE("eig_hermitian matches the 2x2 characteristic-polynomial oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = rng.hermitian(2);
    const auto oracle = eig2x2(a);
    const EigenSystem es = eig_hermitian(a);
    const double scale = 1.0 + std::abs(oracle.hi);
    CHECK(std::abs(es.eigenvalues(0) - oracle.lo) < 1e-12 * scale);
    CHECK(std::abs(es.eigenvalues(1) - oracle.hi) < 1e-12 * scale);
    if (oracle.hi - oracle.lo > 1e-6 * scale) {
      CHECK((es.eigenvectors.col(0) - oracle.v_lo).norm() < 1e-9);
      CHECK((es.eigenvectors.col(1) - oracle.v_hi).norm() < 1e-9);
    }
  }
}

TEST_CASE("eig_hermitian reconstruction and unitarity") {
  Rng rng(12);
  for (Eigen::Index dim : {1, 2, 3, 5, 8, 13, 16}) {
    const Matrix a = rng.hermitian(dim);
    const EigenSystem es = eig_hermitian(a);
    const Matrix rebuilt = es.eigenvectors *
                           es.eigenvalues.asDiagonal() *
                           es.eigenvectors.adjoint();
    const double lmax = es.eigenvalues.cwiseAbs().maxCoeff();
    CHECK((rebuilt - a).norm() <= 1e-10 * (1.0 + lmax));
    CHECK((es.eigenvectors.adjoint() * es.eigenvectors -
           Matrix::Identity(dim, dim))
              .norm() <= 1e-10);
    // Phase convention: pivot entries real and nonnegative.
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::Index pivot = 0;
      es.eigenvectors.col(j).cwiseAbs().maxCoeff(&pivot);
      CHECK(es.eigenvectors(pivot, j).imag() == doctest::Approx(0.0));
      CHECK(es.eigenvectors(pivot, j).real() >= 0.0);
    }
  }
}

TEST_CASE("sqrt_psd on reference inputs") {
  CHECK(rel_frob(sqrt_psd(diag({4, 1})), diag({2, 1})) < 1e-14);
  CHECK(rel_frob(sqrt_psd(Matrix::Identity(5, 5)), Matrix::Identity(5, 5)) <
        1e-14);

  // Spectral synthesis oracle: (sqrt(1.5) +- sqrt(0.5)) / 2 entries.
  const double on = (std::sqrt(1.5) + std::sqrt(0.5)) / 2.0;
  const double off = (std::sqrt(1.5) - std::sqrt(0.5)) / 2.0;
  const Matrix root = sqrt_psd(matrix2(1, 0.5, 0.5, 1));
  CHECK(rel_frob(root, matrix2(on, off, off, on)) < 1e-12);
}

TEST_CASE("sqrt_psd squares back to the input") {
  Rng rng(13);
  for (Eigen::Index dim : {1, 2, 4, 7, 11, 16}) {
    const Matrix a = rng.psd(dim);
    const Matrix b = sqrt_psd(a);
    CHECK((b * b - a).norm() <= 1e-9 * (1.0 + a.norm()));
  }
}

TEST_CASE("sqrt_psd clamps roundoff negatives and rejects real ones") {
  Matrix nearly = diag({1, 0});
  nearly(1, 1) = Scalar(-1e-12, 0);  // within 1e-10 * lambda_max
  CHECK_NOTHROW(sqrt_psd(nearly));
  CHECK_THROWS_AS(sqrt_psd(diag({1, -1e-3})), NotPSD);
  CHECK_THROWS_AS(sqrt_psd(diag({-1, -2})), NotPSD);
}

TEST_CASE("pinv_psd on reference inputs") {
  CHECK(rel_frob(pinv_psd(diag({2, 0})), diag({0.5, 0})) < 1e-14);
  CHECK(rel_frob(pinv_psd(Matrix::Identity(4, 4)), Matrix::Identity(4, 4)) <
        1e-14);

  // Rank-one formula: pinv(v v^*) = v v^* / ||v||^4, v = (1,1).
  const Vector v = testsupport::complexify({1, 1});
  const Matrix vv = v * v.adjoint();
  CHECK(rel_frob(pinv_psd(vv), Matrix(vv / 4.0)) < 1e-12);
}

TEST_CASE("pinv_psd satisfies the Penrose identities") {
  Rng rng(14);
  for (Eigen::Index dim : {1, 3, 6, 10, 16}) {
    // Mix full-rank and rank-deficient inputs.
    const Matrix a =
        dim % 2 == 0 ? rng.psd(dim) : rng.psd_rank(dim, (dim + 1) / 2);
    const Matrix p = pinv_psd(a);
    const double scale = 1.0 + a.norm();
    CHECK((a * p * a - a).norm() <= 1e-8 * scale);
    CHECK((p * a * p - p).norm() <= 1e-8 * (1.0 + p.norm()));
    CHECK(((a * p).adjoint() - a * p).norm() <= 1e-8 * scale);
    CHECK(((p * a).adjoint() - p * a).norm() <= 1e-8 * scale);
  }
}

TEST_CASE("support_projection on reference inputs") {
  CHECK(rel_frob(support_projection(diag({2, 0})), diag({1, 0})) < 1e-14);

  Rng rng(15);
  const Matrix full = rng.psd(4);
  CHECK(rel_frob(support_projection(full), Matrix::Identity(4, 4)) < 1e-12);

  // Already a rank-one projection: fixed point.
  const Matrix proj = matrix2(0.5, -0.5, -0.5, 0.5);
  CHECK(rel_frob(support_projection(proj), proj) < 1e-12);
}

TEST_CASE("support_projection reproduces A and is idempotent") {
  Rng rng(16);
  for (Eigen::Index dim : {2, 5, 9, 16}) {
    const Matrix a = rng.psd_rank(dim, std::max<Eigen::Index>(1, dim / 2));
    const Matrix p = support_projection(a);
    CHECK((p * a - a).norm() <= 1e-9 * (1.0 + a.norm()));
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p - p.adjoint()).norm() <= 1e-10);
  }
}

TEST_CASE("in_range_of_sqrt membership") {
  const Matrix a = diag({1, 0});
  CHECK(in_range_of_sqrt(a, unit_basis_vector(2, 0)));
  CHECK_FALSE(in_range_of_sqrt(a, unit_basis_vector(2, 1)));
  Rng rng(17);
  CHECK(in_range_of_sqrt(Matrix::Identity(3, 3), rng.vector(3)));
}

TEST_CASE("loewner_leq ordering") {
  CHECK(loewner_leq(Matrix::Zero(3, 3), Matrix::Identity(3, 3)));
  CHECK_FALSE(loewner_leq(Matrix::Identity(3, 3), Matrix::Zero(3, 3)));
  // Indefinite difference: eigenvalues of B - A are (1, -0.5).
  CHECK_FALSE(loewner_leq(diag({1, 1}), diag({2, 0.5})));
  CHECK_THROWS_AS(loewner_leq(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                  DimensionMismatch);
}

TEST_CASE("loewner_leq is reflexive and antisymmetric up to tolerance") {
  Rng rng(18);
  ToleranceConfig tol;
  for (Eigen::Index dim : {1, 4, 9}) {
    const Matrix a = rng.psd(dim);
    CHECK(loewner_leq(a, a, tol));

    const double norm_a = opnorm(a);
    const Matrix b =
        a + 1e-12 * norm_a * Matrix::Identity(dim, dim);
    REQUIRE(loewner_leq(a, b, tol));
    REQUIRE(loewner_leq(b, a, tol));
    CHECK((a - b).norm() <=
          10.0 * tol.psd_tol * static_cast<double>(dim) * (1.0 + norm_a));
  }
}
