#include "conedeflate/psd.hpp"

#include <algorithm>
#include <cmath>

namespace conedeflate {

namespace {

void require_square(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("matrix must be square, got " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
}

// Spectral synthesis V f(lambda) V^* for a transformed spectrum.
Matrix synthesize(const EigenSystem& es, const RealVector& transformed) {
  Matrix a = es.eigenvectors * transformed.asDiagonal() *
             es.eigenvectors.adjoint();
  return ((a + a.adjoint()) * 0.5).eval();
}

double rank_cutoff(const EigenSystem& es, const ToleranceConfig& tol) {
  const double lmax = std::max(es.eigenvalues.maxCoeff(), 0.0);
  return tol.rank_tol_rel(es.eigenvalues.size()) * lmax;
}

void require_psd_spectrum(const EigenSystem& es, const ToleranceConfig& tol,
                          double scale_hint) {
  const double lmax = es.eigenvalues.maxCoeff();
  const double scale = std::max({lmax, scale_hint, 0.0});
  const double lmin = es.eigenvalues.minCoeff();
  if (lmin < -tol.psd_tol * scale) {
    throw NotPSD("matrix is not positive semidefinite: min eigenvalue " +
                 std::to_string(lmin) + " below -psd_tol * " +
                 std::to_string(scale));
  }
}

}  // namespace

double maxabs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& a, const ToleranceConfig& tol) {
  if (a.rows() != a.cols()) return false;
  if (a.rows() == 0) return true;
  const double gap = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return gap <= tol.hermit_tol * (1.0 + maxabs(a));
}

void require_hermitian(const Matrix& a, const ToleranceConfig& tol) {
  require_square(a);
  if (!is_hermitian(a, tol)) {
    throw NotHermitian("matrix is not Hermitian within hermit_tol");
  }
}

Matrix hermitian_part(const Matrix& a) {
  return ((a + a.adjoint()) * 0.5).eval();
}

double opnorm(const Matrix& a) {
  require_square(a);
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalue solver failed to converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EigenSystem eig_hermitian(const Matrix& a, const ToleranceConfig& tol) {
  tol.validate();
  require_hermitian(a, tol);
  if (a.rows() == 0) {
    throw DimensionMismatch("eigendecomposition requires dimension >= 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalue solver failed to converge");
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};

  // Fix each column's phase: first component of largest modulus becomes
  // real and nonnegative, which makes repeated runs reproducible.
  for (Eigen::Index j = 0; j < es.eigenvectors.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < es.eigenvectors.rows(); ++i) {
      const double m = std::abs(es.eigenvectors(i, j));
      if (m > best) {
        best = m;
        pivot = i;
      }
    }
    const Scalar p = es.eigenvectors(pivot, j);
    if (std::abs(p) > 0.0) {
      es.eigenvectors.col(j) *= std::conj(p) / std::abs(p);
      es.eigenvectors(pivot, j) = Scalar(std::abs(p), 0.0);
    }
  }
  return es;
}

ClampOutcome clamp_psd(const Matrix& a, const ToleranceConfig& tol,
                       double scale_hint) {
  EigenSystem es = eig_hermitian(a, tol);
  require_psd_spectrum(es, tol, scale_hint);
  ClampOutcome out;
  RealVector clamped = es.eigenvalues;
  for (Eigen::Index i = 0; i < clamped.size(); ++i) {
    if (clamped(i) < 0.0) {
      out.clamped_mass += -clamped(i);
      clamped(i) = 0.0;
    }
  }
  out.lambda_max = clamped.size() ? clamped.maxCoeff() : 0.0;
  out.matrix = synthesize(es, clamped);
  return out;
}

Matrix sqrt_psd(const Matrix& a, const ToleranceConfig& tol) {
  EigenSystem es = eig_hermitian(a, tol);
  require_psd_spectrum(es, tol, 0.0);
  RealVector roots = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return synthesize(es, roots);
}

Matrix pinv_psd(const Matrix& a, const ToleranceConfig& tol) {
  EigenSystem es = eig_hermitian(a, tol);
  require_psd_spectrum(es, tol, 0.0);
  const double cutoff = rank_cutoff(es, tol);
  RealVector inv = RealVector::Zero(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (es.eigenvalues(i) > cutoff) inv(i) = 1.0 / es.eigenvalues(i);
  }
  return synthesize(es, inv);
}

Matrix support_projection(const Matrix& a, const ToleranceConfig& tol) {
  EigenSystem es = eig_hermitian(a, tol);
  require_psd_spectrum(es, tol, 0.0);
  const double cutoff = rank_cutoff(es, tol);
  RealVector indicator = RealVector::Zero(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < indicator.size(); ++i) {
    if (es.eigenvalues(i) > cutoff) indicator(i) = 1.0;
  }
  return synthesize(es, indicator);
}

bool in_range_of_sqrt(const Matrix& a, const Vector& v,
                      const ToleranceConfig& tol) {
  if (v.size() != a.rows()) {
    throw DimensionMismatch("vector length does not match matrix dimension");
  }
  const Matrix proj = support_projection(a, tol);
  const double leak = (v - proj * v).norm();
  return leak <= tol.rank_tol_rel(a.rows()) * (1.0 + v.norm());
}

bool loewner_leq(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("Loewner comparison requires equal dimensions");
  }
  require_hermitian(a, tol);
  require_hermitian(b, tol);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(b - a),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalue solver failed to converge");
  }
  return solver.eigenvalues().minCoeff() >= -tol.psd_tol * (1.0 + opnorm(b));
}

}  // namespace conedeflate
