#pragma once

#include "conedeflate/dynamics.hpp"
#include "conedeflate/types.hpp"

#include <string>
#include <vector>

namespace conedeflate {

enum class KernelKind { Gaussian, Polynomial, Linear, ExplicitGram };

const char* to_string(KernelKind kind);

/// Gaussian convention: K(x, y) = exp(-||x - y||^2 / (2 sigma^2)).
/// Polynomial: (<x, y> + offset)^degree with integer degree >= 1 and
/// offset >= 0.
struct KernelConfig {
  KernelKind kind = KernelKind::Gaussian;
  double sigma = 1.0;
  int degree = 2;
  double offset = 0.0;
  Matrix gram;  // ExplicitGram only
};

/// Sample-level model of the reproducing-kernel space: Gram matrix G and
/// embedded kernel sections kappa_i = G^{1/2} e_i, which reproduce every
/// pairwise inner product <kappa_i, kappa_j> = G[i][j].
struct KernelModel {
  RealMatrix points;               // m x d, one sample per row
  KernelConfig kernel;
  Matrix gram;                     // m x m PSD
  std::vector<Vector> sections;    // kappa_i
  std::vector<int> zero_sections;  // indices with G[i][i] at the rank floor
};

Matrix gram_matrix(const KernelConfig& kernel, const RealMatrix& points);

/// kappa_i = G^{1/2} e_i.
std::vector<Vector> embed_sections(const Matrix& gram,
                                   const ToleranceConfig& tol = {});

KernelModel make_kernel_model(const KernelConfig& kernel,
                              const RealMatrix& points,
                              const ToleranceConfig& tol = {});

enum class ScheduleKind { Cyclic, Greedy, Explicit };

const char* to_string(ScheduleKind kind);

/// Point-visit order for the feature iteration. Cyclic sweeps indices in
/// order; Greedy picks the index maximizing <kappa_i, R kappa_i> / G[i][i];
/// Explicit follows a user list. Zero sections are skipped.
struct Schedule {
  ScheduleKind kind = ScheduleKind::Cyclic;
  std::vector<int> order;  // Explicit only
};

/// F[i][n] = <kappa_i, E_n> and the Gram reconstruction defect
/// ||G - F F^*||_F / (1 + ||G||_F).
struct FeatureTable {
  Matrix values;  // m x N
  double residual_gram_defect = 0.0;
};

struct KernelFeatureResult {
  FeatureTable table;
  ResidualChain chain;              // run on C^m with R_0 = I
  std::vector<int> visit_order;     // section index chosen per step
  std::vector<double> achieved_ratios;  // <u_n, R_n u_n> / ||R_n|| per step
};

KernelFeatureResult kernel_feature_chain(const KernelModel& model,
                                         const Schedule& schedule,
                                         const StopRule& stop = {},
                                         const ToleranceConfig& tol = {});

/// Entrywise sup defect max_{i,j} |G[i][j] - sum_n F[i][n] conj(F[j][n])|.
double kernel_reconstruction_error(const KernelModel& model,
                                   const FeatureTable& table);

}  // namespace conedeflate
