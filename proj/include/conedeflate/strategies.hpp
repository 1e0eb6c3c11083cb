#pragma once

#include "conedeflate/dynamics.hpp"
#include "conedeflate/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace conedeflate {

enum class StrategyKind {
  Greedy,
  WeakGreedy,
  CyclicBasis,
  RandomSphere,
  ExplicitList,
};

const char* to_string(StrategyKind kind);

/// Direction-selection policy. c is the weak-greedy constant in (0, 1];
/// candidate_pool is the screening set for WeakGreedy; explicit_list feeds
/// ExplicitList. Pool and explicit vectors must be unit norm within 1e-12.
struct StrategyConfig {
  StrategyKind kind = StrategyKind::Greedy;
  double c = 1.0;
  std::uint64_t seed = 0;
  std::vector<Vector> candidate_pool;
  std::vector<Vector> explicit_list;
};

void validate_strategy(const StrategyConfig& cfg);

/// Phase-normalized top eigenvector of R; realizes the weak-greedy bound
/// with c = 1. Degenerate top eigenvalues break ties toward the lowest
/// eigenvector index under the fixed phase convention.
Vector greedy_direction(const Matrix& r, const ToleranceConfig& tol = {},
                        double zero_tol = 0.0);

struct DirectionCertificate {
  Vector direction;
  double quad_form = 0.0;  // <u, R u>
  double opnorm = 0.0;     // ||R|| at selection time
};

/// First pool candidate u with <u, R u> >= c * ||R||. Throws
/// NoCandidateSatisfiesC when the pool certifies nothing; callers may fall
/// back to greedy_direction.
DirectionCertificate weak_greedy_direction(const Matrix& r,
                                           const StrategyConfig& cfg,
                                           const ToleranceConfig& tol = {});

/// e_1, ..., e_dim, e_1, ... indefinitely.
DirectionSource cyclic_basis_directions(Eigen::Index dim);

/// I.i.d. uniform directions on the unit sphere of C^dim: complex standard
/// Gaussian entries (mt19937_64 bits -> [0,1) doubles -> Box-Muller pairs),
/// normalized. Identical seed, identical sequence.
DirectionSource random_sphere_directions(Eigen::Index dim, std::uint64_t seed);

DirectionSource explicit_directions(std::vector<Vector> list);

DirectionSource make_direction_source(const StrategyConfig& cfg,
                                      Eigen::Index dim,
                                      const ToleranceConfig& tol = {});

/// Deterministic sampler behind random_sphere_directions, exposed so tests
/// and the kernel scheduler can draw from the same stream.
class SphereSampler {
 public:
  SphereSampler(Eigen::Index dim, std::uint64_t seed)
      : dim_(dim), rng_(seed) {}

  Vector next();

 private:
  double uniform01();  // 53-bit mantissa draw in [0, 1)

  Eigen::Index dim_;
  std::mt19937_64 rng_;
};

}  // namespace conedeflate
