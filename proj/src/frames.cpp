#include "conedeflate/frames.hpp"

#include <utility>

namespace conedeflate {

namespace {

void require_dim(const FrameSystem& frame, Eigen::Index dim,
                 const char* what) {
  if (frame.dim != dim) {
    throw DimensionMismatch(std::string(what) +
                            ": frame dimension does not match");
  }
}

}  // namespace

FrameSystem frame_from_chain(const ResidualChain& chain, std::string source) {
  FrameSystem frame;
  frame.dim = chain.dim();
  frame.source = std::move(source);
  frame.vectors.reserve(chain.steps.size());
  for (const PhiStep& step : chain.steps) {
    frame.vectors.push_back(step.residual_vector);
  }
  return frame;
}

std::vector<Scalar> analysis_apply(const FrameSystem& frame, const Vector& x) {
  require_dim(frame, x.size(), "analysis_apply");
  std::vector<Scalar> coeffs;
  coeffs.reserve(frame.vectors.size());
  for (const Vector& e : frame.vectors) {
    coeffs.push_back(e.dot(x));
  }
  return coeffs;
}

Matrix frame_operator(const FrameSystem& frame) {
  Matrix s = Matrix::Zero(frame.dim, frame.dim);
  for (const Vector& e : frame.vectors) {
    if (e.size() != frame.dim) {
      throw DimensionMismatch("frame vector length does not match dimension");
    }
    s += e * e.adjoint();
  }
  return s;
}

double parseval_defect(const FrameSystem& frame, const Matrix& r0) {
  require_dim(frame, r0.rows(), "parseval_defect");
  return (frame_operator(frame) - r0).norm() / (1.0 + r0.norm());
}

bool completeness_check(const FrameSystem& frame, const Matrix& r0,
                        const ToleranceConfig& tol) {
  require_dim(frame, r0.rows(), "completeness_check");
  EigenSystem es = eig_hermitian(r0, tol);
  const double lmax = std::max(es.eigenvalues.maxCoeff(), 0.0);
  if (es.eigenvalues.minCoeff() < -tol.psd_tol * lmax) {
    throw NotPSD("completeness_check requires a PSD reference operator");
  }
  const double cutoff = tol.rank_tol_rel(r0.rows()) * lmax;
  Eigen::Index support_rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    if (es.eigenvalues(i) > cutoff) ++support_rank;
  }
  if (support_rank == 0) return true;
  if (frame.vectors.empty()) return false;

  const Matrix proj = support_projection(r0, tol);
  Matrix stacked(frame.dim, static_cast<Eigen::Index>(frame.vectors.size()));
  for (std::size_t j = 0; j < frame.vectors.size(); ++j) {
    stacked.col(static_cast<Eigen::Index>(j)) = proj * frame.vectors[j];
  }
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const RealVector sigma = svd.singularValues();
  const double sigma_cut = static_cast<double>(std::max(stacked.rows(),
                                                        stacked.cols())) *
                           std::numeric_limits<double>::epsilon() *
                           sigma.maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > sigma_cut) ++rank;
  }
  return rank >= support_rank;
}

FrameSystem parsevalize(Eigen::Index dim, const DirectionSource& directions,
                        const StopRule& stop, const ToleranceConfig& tol) {
  if (dim < 1) throw InvalidConfig("dimension must be >= 1");
  ResidualChain chain =
      run_chain(Matrix::Identity(dim, dim), directions, stop, tol);
  FrameSystem frame = frame_from_chain(chain, "parsevalize");
  frame.parseval_defect_vs_identity =
      parseval_defect(frame, Matrix::Identity(dim, dim));
  frame.certified = chain.stop_reason == StopReason::ExactZero ||
                    frame.parseval_defect_vs_identity <= 1e-8;
  return frame;
}

Vector reconstruct(const FrameSystem& frame, const Vector& x) {
  require_dim(frame, x.size(), "reconstruct");
  Vector out = Vector::Zero(frame.dim);
  for (const Vector& e : frame.vectors) {
    out += e.dot(x) * e;
  }
  return out;
}

std::vector<std::size_t> zero_vector_indices(const FrameSystem& frame,
                                             double threshold) {
  std::vector<std::size_t> zeros;
  for (std::size_t i = 0; i < frame.vectors.size(); ++i) {
    if (frame.vectors[i].norm() <= threshold) zeros.push_back(i);
  }
  return zeros;
}

}  // namespace conedeflate
