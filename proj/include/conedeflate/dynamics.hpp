#pragma once

#include "conedeflate/psd.hpp"
#include "conedeflate/types.hpp"

#include <functional>
#include <vector>

namespace conedeflate {

/// One application of the residual-weighted update
///   R -> R^{1/2} (I - |u><u|) R^{1/2} = R - |E><E|,  E = R^{1/2} u.
struct PhiStep {
  int index = 0;
  Vector direction;        // u_n, unit norm
  Vector residual_vector;  // E_n = R_n^{1/2} u_n
  double step_energy = 0.0;          // ||E_n||^2
  double residual_trace_after = 0.0;
  double residual_opnorm_after = 0.0;
  double clamp_magnitude = 0.0;  // negative eigenvalue mass clamped this step
  bool zero_energy = false;      // direction was numerically in ker(R_n)
};

enum class StopReason {
  MaxSteps,
  TraceBelowTol,
  OpNormBelowTol,
  Stagnation,
  ExactZero,
};

const char* to_string(StopReason reason);

/// Finite surrogate for the n -> infinity limit. trace_tol defaults to
/// 1e-12 * tr(R0) when unset; the run reports ExactZero once the residual
/// trace falls to that numerically-zero level, and TraceBelowTol when an
/// explicit looser threshold fires first.
struct StopRule {
  int max_steps = 1000;
  std::optional<double> trace_tol{};   // absolute
  std::optional<double> opnorm_tol{};  // absolute
  int stagnation_window = 0;           // 0 disables the stagnation rule
  double stagnation_energy_tol = 0.0;
};

struct PhiOutcome {
  Matrix next;
  Vector residual;
  double clamp_magnitude = 0.0;
  double opnorm_before = 0.0;
  double opnorm_after = 0.0;
};

/// Single update step. The next residual is computed as R - E E^* (equal to
/// the congruence form, one multiplication cheaper) and clamped back onto
/// the cone at the parent scale ||R||.
PhiOutcome phi_update(const Matrix& r, const Vector& u,
                      const ToleranceConfig& tol = {});

/// Congruence form R^{1/2} (I - |u><u|) R^{1/2}, kept as an independent
/// cross-check of the subtraction form.
Matrix phi_update_congruence(const Matrix& r, const Vector& u,
                             const ToleranceConfig& tol = {});

/// Produces the next update direction given the current residual and the
/// step index, or nullopt when exhausted.
using DirectionSource =
    std::function<std::optional<Vector>(const Matrix& residual, int step)>;

/// Complete record of a finite run: every intermediate residual R_0..R_m,
/// one PhiStep per update, and why the run stopped.
struct ResidualChain {
  std::vector<Matrix> residuals;  // size steps.size() + 1
  std::vector<PhiStep> steps;
  StopReason stop_reason = StopReason::MaxSteps;
  ToleranceConfig tolerances;

  const Matrix& initial() const { return residuals.front(); }
  const Matrix& final_residual() const { return residuals.back(); }
  Eigen::Index dim() const { return residuals.front().rows(); }
};

ResidualChain run_chain(const Matrix& r0, const DirectionSource& directions,
                        const StopRule& stop = {},
                        const ToleranceConfig& tol = {});

/// || (R_0 - R_N) - sum_{n<N} E_n E_n^* ||_F / (1 + ||R_0||_F).
double telescoping_defect(const ResidualChain& chain, std::size_t n);

struct EnergyReport {
  std::vector<double> energies;
  std::vector<double> partial_sums;
  double trace_identity_gap = 0.0;
};

/// Scalar energy audit: tr(R_0) - tr(R_final) must equal the summed step
/// energies, and the partial sums may never exceed tr(R_0).
EnergyReport energy_report(const ResidualChain& chain);

struct QuadraticDefect {
  double lhs = 0.0;  // <x, (R_0 - R_final) x>
  double rhs = 0.0;  // sum_n |<E_n, x>|^2
};

QuadraticDefect quadratic_defect(const ResidualChain& chain, const Vector& x);

}  // namespace conedeflate
