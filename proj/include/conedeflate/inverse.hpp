#pragma once

#include "conedeflate/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conedeflate {

/// Per-step evidence that a decreasing rank-one chain arises from the
/// residual-weighted dynamics: membership E_n in ran(R_n^{1/2}) and the
/// intrinsic normalization <E_n, pinv(R_n) E_n> = 1. Steps whose E_n is
/// numerically zero are excluded from both checks and recorded as such.
struct StepWitness {
  int index = 0;
  bool range_membership = false;
  double normalization_value = 0.0;
  bool excluded_zero_step = false;
  std::optional<Vector> recovered_u;  // filled by recover_directions
};

struct ChainWitness {
  std::vector<StepWitness> steps;
  bool valid = false;
  int failure_step = -1;          // -1 when valid
  std::string failure_reason;
  double norm_tol = 1e-8;
};

/// Checks R_{n+1} = R_n - E_n E_n^* first (InconsistentChain on failure,
/// relative 1e-9), then the range and normalization conditions per step.
/// norm_tol bounds |<E_n, pinv(R_n) E_n> - 1|; it is decoupled from psd_tol
/// because the pseudoinverse amplifies error near the rank boundary.
ChainWitness verify_chain(const std::vector<Matrix>& r_list,
                          const std::vector<Vector>& e_list,
                          const ToleranceConfig& tol = {},
                          double norm_tol = 1e-8);

/// Recovers the generating unit vectors u_n = pinv(R_n)^{1/2} E_n of a
/// verified chain. Excluded zero steps come back absent. Throws
/// InvalidChain when verification fails.
std::vector<std::optional<Vector>> recover_directions(
    const std::vector<Matrix>& r_list, const std::vector<Vector>& e_list,
    const ToleranceConfig& tol = {}, double norm_tol = 1e-8);

}  // namespace conedeflate
