#pragma once

#include "conedeflate/dynamics.hpp"
#include "conedeflate/types.hpp"

#include <string>
#include <vector>

namespace conedeflate {

/// A finite family {E_n} with its frame-theoretic bookkeeping. Vectors from
/// kernel directions are retained (they do not affect the frame operator)
/// so indices stay aligned with the generating chain.
struct FrameSystem {
  Eigen::Index dim = 0;
  std::vector<Vector> vectors;
  std::string source;  // provenance: chain id or "external"
  bool certified = false;            // Parseval certificate (parsevalize)
  double parseval_defect_vs_identity = 0.0;  // meaningful when parsevalized
};

FrameSystem frame_from_chain(const ResidualChain& chain, std::string source);

/// Analysis coefficients (<E_n, x>)_n, linear in x.
std::vector<Scalar> analysis_apply(const FrameSystem& frame, const Vector& x);

/// Frame operator S = sum_n |E_n><E_n|; the empty family gives the zero
/// matrix. Equals R_0 - R_final for chain-sourced families.
Matrix frame_operator(const FrameSystem& frame);

/// || S - R_0 ||_F / (1 + ||R_0||_F). At finite dimension a small defect
/// certifies the quadratic-form identity sum |<E_n,x>|^2 = <x, R_0 x> for
/// all x simultaneously.
double parseval_defect(const FrameSystem& frame, const Matrix& r0);

/// True iff span{E_n} covers the support subspace of R_0.
bool completeness_check(const FrameSystem& frame, const Matrix& r0,
                        const ToleranceConfig& tol = {});

/// Runs the dynamics from R_0 = I and returns the extracted family. The
/// frame is Parseval-certified when the run exhausts (ExactZero) or the
/// operator defect against the identity is at most 1e-8; otherwise it is
/// returned uncertified with the measured defect. A soft alternative to
/// Gram-Schmidt: redundant directions are deflated, not annihilated.
FrameSystem parsevalize(Eigen::Index dim, const DirectionSource& directions,
                        const StopRule& stop = {},
                        const ToleranceConfig& tol = {});

/// sum_n <E_n, x> E_n = frame_operator(F) x; recovers x itself for a
/// certified Parseval family.
Vector reconstruct(const FrameSystem& frame, const Vector& x);

/// Indices of retained zero vectors (norm at most tol-scale), flagged for
/// callers that must exclude kernel-direction steps.
std::vector<std::size_t> zero_vector_indices(const FrameSystem& frame,
                                             double threshold = 1e-12);

}  // namespace conedeflate
