#include "conedeflate/inverse.hpp"

#include "conedeflate/psd.hpp"

#include <cmath>

namespace conedeflate {

namespace {

void check_shapes(const std::vector<Matrix>& r_list,
                  const std::vector<Vector>& e_list) {
  if (r_list.empty()) {
    throw DimensionMismatch("chain requires at least one operator");
  }
  if (r_list.size() != e_list.size() + 1) {
    throw DimensionMismatch(
        "chain requires one more operator than residual vectors");
  }
  const Eigen::Index dim = r_list.front().rows();
  for (const Matrix& r : r_list) {
    if (r.rows() != dim || r.cols() != dim) {
      throw DimensionMismatch("chain operators must share one dimension");
    }
  }
  for (const Vector& e : e_list) {
    if (e.size() != dim) {
      throw DimensionMismatch("residual vector length does not match chain");
    }
  }
}

}  // namespace

ChainWitness verify_chain(const std::vector<Matrix>& r_list,
                          const std::vector<Vector>& e_list,
                          const ToleranceConfig& tol, double norm_tol) {
  tol.validate();
  check_shapes(r_list, e_list);

  for (std::size_t n = 0; n < r_list.size(); ++n) {
    require_hermitian(r_list[n], tol);
  }

  // The theorem presupposes the subtraction identity; test it before any
  // range or normalization analysis.
  for (std::size_t n = 0; n < e_list.size(); ++n) {
    const Matrix expected =
        r_list[n] - e_list[n] * e_list[n].adjoint();
    const double gap = (r_list[n + 1] - expected).norm();
    if (gap > 1e-9 * (1.0 + r_list[n].norm())) {
      throw InconsistentChain("R_{n+1} != R_n - E_n E_n^* at step " +
                              std::to_string(n));
    }
  }

  ChainWitness witness;
  witness.norm_tol = norm_tol;
  witness.valid = true;

  for (std::size_t n = 0; n < e_list.size(); ++n) {
    const Matrix& r = r_list[n];
    const Vector& e = e_list[n];

    EigenSystem es = eig_hermitian(r, tol);
    const double lmax = std::max(es.eigenvalues.maxCoeff(), 0.0);
    if (es.eigenvalues.minCoeff() < -tol.psd_tol * lmax) {
      throw NotPSD("chain operator at step " + std::to_string(n) +
                   " is not PSD");
    }
    const double cutoff = tol.rank_tol_rel(r.rows()) * lmax;

    StepWitness step;
    step.index = static_cast<int>(n);

    // Below the numerical rank floor the pseudoinverse cannot see the
    // vector at all; such steps carry no testable normalization.
    if (e.squaredNorm() <= cutoff) {
      step.excluded_zero_step = true;
      witness.steps.push_back(std::move(step));
      continue;
    }

    step.range_membership = in_range_of_sqrt(r, e, tol);
    step.normalization_value = e.dot(pinv_psd(r, tol) * e).real();

    const bool ok = step.range_membership &&
                    std::abs(step.normalization_value - 1.0) <= norm_tol;
    if (!ok && witness.valid) {
      witness.valid = false;
      witness.failure_step = static_cast<int>(n);
      witness.failure_reason =
          !step.range_membership
              ? "E_n leaves ran(R_n^{1/2})"
              : "normalization <E_n, pinv(R_n) E_n> deviates from 1";
    }
    witness.steps.push_back(std::move(step));
  }

  return witness;
}

std::vector<std::optional<Vector>> recover_directions(
    const std::vector<Matrix>& r_list, const std::vector<Vector>& e_list,
    const ToleranceConfig& tol, double norm_tol) {
  ChainWitness witness = verify_chain(r_list, e_list, tol, norm_tol);
  if (!witness.valid) {
    throw InvalidChain("chain fails verification at step " +
                       std::to_string(witness.failure_step) + ": " +
                       witness.failure_reason);
  }
  std::vector<std::optional<Vector>> directions(e_list.size());
  for (std::size_t n = 0; n < e_list.size(); ++n) {
    if (witness.steps[n].excluded_zero_step) continue;
    const Matrix half_pinv = sqrt_psd(pinv_psd(r_list[n], tol), tol);
    directions[n] = half_pinv * e_list[n];
  }
  return directions;
}

}  // namespace conedeflate
