#include "conedeflate/strategies.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace conedeflate {

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Greedy:
      return "greedy";
    case StrategyKind::WeakGreedy:
      return "weak-greedy";
    case StrategyKind::CyclicBasis:
      return "cyclic";
    case StrategyKind::RandomSphere:
      return "random";
    case StrategyKind::ExplicitList:
      return "explicit";
  }
  return "unknown";
}

void validate_strategy(const StrategyConfig& cfg) {
  if (cfg.kind == StrategyKind::WeakGreedy) {
    if (!(cfg.c > 0.0 && cfg.c <= 1.0)) {
      throw InvalidConfig("weak-greedy constant c must lie in (0, 1]");
    }
    if (cfg.candidate_pool.empty()) {
      throw InvalidConfig("weak-greedy requires a nonempty candidate pool");
    }
  }
  if (cfg.kind == StrategyKind::ExplicitList && cfg.explicit_list.empty()) {
    throw InvalidConfig("explicit strategy requires a direction list");
  }
  auto check_unit = [](const std::vector<Vector>& vs, const char* what) {
    for (const Vector& v : vs) {
      if (std::abs(v.norm() - 1.0) > 1e-12) {
        throw InvalidConfig(std::string(what) +
                            " vectors must be unit norm within 1e-12");
      }
    }
  };
  check_unit(cfg.candidate_pool, "candidate pool");
  check_unit(cfg.explicit_list, "explicit");
}

Vector greedy_direction(const Matrix& r, const ToleranceConfig& tol,
                        double zero_tol) {
  EigenSystem es = eig_hermitian(r, tol);
  const double lmax = es.eigenvalues.maxCoeff();
  if (lmax <= zero_tol) {
    throw ZeroOperator("greedy direction undefined for the zero operator");
  }
  // Ascending order: scan up from the bottom for the first eigenvalue tied
  // with the top one, so degenerate spectra resolve deterministically.
  const double tie = 1e-12 * (1.0 + std::abs(lmax));
  Eigen::Index pick = es.eigenvalues.size() - 1;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    if (es.eigenvalues(i) >= lmax - tie) {
      pick = i;
      break;
    }
  }
  return es.eigenvectors.col(pick);
}

DirectionCertificate weak_greedy_direction(const Matrix& r,
                                           const StrategyConfig& cfg,
                                           const ToleranceConfig& tol) {
  validate_strategy(cfg);
  require_hermitian(r, tol);
  const double norm = opnorm(r);
  for (const Vector& u : cfg.candidate_pool) {
    if (u.size() != r.rows()) {
      throw DimensionMismatch("pool vector length does not match operator");
    }
    const double quad = u.dot(r * u).real();
    if (quad >= cfg.c * norm) {
      return DirectionCertificate{u, quad, norm};
    }
  }
  throw NoCandidateSatisfiesC(
      "no pool candidate attains <u,Ru> >= c * ||R||");
}

DirectionSource cyclic_basis_directions(Eigen::Index dim) {
  if (dim < 1) throw InvalidConfig("dimension must be >= 1");
  return [dim](const Matrix&, int step) -> std::optional<Vector> {
    return unit_basis_vector(dim, static_cast<Eigen::Index>(step) % dim);
  };
}

double SphereSampler::uniform01() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

Vector SphereSampler::next() {
  Vector v(dim_);
  while (true) {
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const double u1 = 1.0 - uniform01();  // (0, 1]
      const double u2 = uniform01();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      v(i) = Scalar(radius * std::cos(angle), radius * std::sin(angle));
    }
    const double norm = v.norm();
    if (norm > 0.0) return v / norm;
  }
}

DirectionSource random_sphere_directions(Eigen::Index dim,
                                         std::uint64_t seed) {
  if (dim < 1) throw InvalidConfig("dimension must be >= 1");
  auto sampler = std::make_shared<SphereSampler>(dim, seed);
  return [sampler](const Matrix&, int) -> std::optional<Vector> {
    return sampler->next();
  };
}

DirectionSource explicit_directions(std::vector<Vector> list) {
  auto shared = std::make_shared<std::vector<Vector>>(std::move(list));
  return [shared](const Matrix&, int step) -> std::optional<Vector> {
    const auto idx = static_cast<std::size_t>(step);
    if (idx >= shared->size()) return std::nullopt;
    return (*shared)[idx];
  };
}

DirectionSource make_direction_source(const StrategyConfig& cfg,
                                      Eigen::Index dim,
                                      const ToleranceConfig& tol) {
  validate_strategy(cfg);
  switch (cfg.kind) {
    case StrategyKind::Greedy:
      return [tol](const Matrix& r, int) -> std::optional<Vector> {
        return greedy_direction(r, tol);
      };
    case StrategyKind::WeakGreedy:
      return [cfg, tol](const Matrix& r, int) -> std::optional<Vector> {
        return weak_greedy_direction(r, cfg, tol).direction;
      };
    case StrategyKind::CyclicBasis:
      return cyclic_basis_directions(dim);
    case StrategyKind::RandomSphere:
      return random_sphere_directions(dim, cfg.seed);
    case StrategyKind::ExplicitList:
      return explicit_directions(cfg.explicit_list);
  }
  throw InvalidConfig("unknown strategy kind");
}

}  // namespace conedeflate
