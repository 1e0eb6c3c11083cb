#pragma once

#include "conedeflate/types.hpp"

namespace conedeflate {

/// Eigendecomposition of a Hermitian matrix: A = V diag(lambda) V^*.
/// Eigenvalues ascend; each eigenvector column is phase-fixed so that its
/// first component of largest absolute value is real and nonnegative.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

double maxabs(const Matrix& a);

/// max |A_ij - conj(A_ji)| <= hermit_tol * (1 + maxabs(A))
bool is_hermitian(const Matrix& a, const ToleranceConfig& tol = {});
void require_hermitian(const Matrix& a, const ToleranceConfig& tol = {});

Matrix hermitian_part(const Matrix& a);

/// Operator norm (largest |eigenvalue|) of a Hermitian matrix.
double opnorm(const Matrix& a);

EigenSystem eig_hermitian(const Matrix& a, const ToleranceConfig& tol = {});

/// Result of projecting a nearly-PSD matrix back onto the cone.
/// clamped_mass is the total negative eigenvalue mass set to zero;
/// lambda_max is the largest eigenvalue after clamping.
struct ClampOutcome {
  Matrix matrix;
  double clamped_mass = 0.0;
  double lambda_max = 0.0;
};

/// Zeroes eigenvalues in [-psd_tol * scale, 0) and rebuilds the matrix,
/// where scale = max(lambda_max(a), scale_hint). Throws NotPSD when an
/// eigenvalue falls below the window. scale_hint lets callers that subtract
/// from a known-size operator keep a meaningful scale when the result is
/// numerically zero.
ClampOutcome clamp_psd(const Matrix& a, const ToleranceConfig& tol = {},
                       double scale_hint = 0.0);

/// Unique PSD square root via spectral synthesis.
Matrix sqrt_psd(const Matrix& a, const ToleranceConfig& tol = {});

/// Moore-Penrose pseudoinverse of a PSD matrix: spectral reciprocal on the
/// numerical support, zero on the null space.
Matrix pinv_psd(const Matrix& a, const ToleranceConfig& tol = {});

/// Orthogonal projection onto the span of eigenvectors with
/// lambda > rank_tol * lambda_max.
Matrix support_projection(const Matrix& a, const ToleranceConfig& tol = {});

/// At finite dimension ran(A^{1/2}) equals the support subspace, so v lies in
/// it iff the out-of-support component is negligible:
/// ||(I - support_projection(A)) v|| <= rank_tol * (1 + ||v||).
bool in_range_of_sqrt(const Matrix& a, const Vector& v,
                      const ToleranceConfig& tol = {});

/// Loewner order test: A <= B iff min eig(B - A) >= -psd_tol * (1 + ||B||).
bool loewner_leq(const Matrix& a, const Matrix& b,
                 const ToleranceConfig& tol = {});

}  // namespace conedeflate
