#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace conedeflate {

using Real = double;
using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Inner products are linear in the second argument throughout:
// <a, b> = a^* b, which is Eigen's a.dot(b).

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
  using Error::Error;
};
struct NotPSD : Error {
  using Error::Error;
};
struct NotUnitVector : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct ZeroOperator : Error {
  using Error::Error;
};
struct NoCandidateSatisfiesC : Error {
  using Error::Error;
};
struct EmptyDirectionSource : Error {
  using Error::Error;
};
struct EmptySchedule : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct InconsistentChain : Error {
  using Error::Error;
};
struct InvalidChain : Error {
  using Error::Error;
};
struct InvalidKernelParams : Error {
  using Error::Error;
};

// Configuration and input-format problems; the CLI maps these to usage errors.
struct InvalidConfig : Error {
  using Error::Error;
};

/// Relative tolerances shared by every numerical operation.
///
/// rank_tol is the relative null-space cutoff: eigenvalues at or below
/// rank_tol * lambda_max count as zero. When unset it defaults to
/// dim * machine epsilon.
struct ToleranceConfig {
  double psd_tol = 1e-10;
  std::optional<double> rank_tol{};
  double hermit_tol = 1e-12;

  double rank_tol_rel(Eigen::Index dim) const {
    return rank_tol ? *rank_tol
                    : static_cast<double>(dim) *
                          std::numeric_limits<double>::epsilon();
  }

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0) || !(v < 1e-2)) {
        throw InvalidConfig(std::string(name) +
                            " must lie strictly inside (0, 1e-2)");
      }
    };
    check(psd_tol, "psd_tol");
    check(hermit_tol, "hermit_tol");
    if (rank_tol) check(*rank_tol, "rank_tol");
  }
};

inline Vector unit_basis_vector(Eigen::Index dim, Eigen::Index i) {
  Vector e = Vector::Zero(dim);
  e(i) = Scalar(1.0, 0.0);
  return e;
}

}  // namespace conedeflate
