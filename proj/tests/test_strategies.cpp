#include "conedeflate/strategies.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>

using namespace conedeflate;
using testsupport::matrix2;
using testsupport::Rng;

TEST_CASE("greedy direction picks the top eigenvector") {
  CHECK((greedy_direction(matrix2(2, 0, 0, 1)) - unit_basis_vector(2, 0))
            .norm() < 1e-14);
  // Degenerate spectrum: tie-break to the first index.
  CHECK((greedy_direction(Matrix::Identity(2, 2)) - unit_basis_vector(2, 0))
            .norm() < 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK((greedy_direction(matrix2(1, 0.5, 0.5, 1)) -
         testsupport::complexify({s, s}))
            .norm() < 1e-12);
  CHECK_THROWS_AS(greedy_direction(Matrix::Zero(3, 3)), ZeroOperator);
}

TEST_CASE("greedy quadratic form attains the operator norm") {
  Rng rng(31);
  for (Eigen::Index dim : {2, 5, 11}) {
    const Matrix r = rng.psd(dim);
    const Vector u = greedy_direction(r);
    const double norm = opnorm(r);
    CHECK(std::abs(u.dot(r * u).real() - norm) <= 1e-10 * (1.0 + norm));
  }
}

TEST_CASE("greedy step removes the top eigenvalue exactly") {
  Rng rng(32);
  for (Eigen::Index dim : {2, 4, 9}) {
    const Matrix r = rng.psd(dim);
    const EigenSystem es = eig_hermitian(r);
    const double second =
        dim > 1 ? es.eigenvalues(dim - 2) : 0.0;
    const auto out = phi_update(r, greedy_direction(r));
    CHECK(std::abs(out.opnorm_after - second) <= 1e-9 * opnorm(r));
  }
}

TEST_CASE("greedy chains exhaust in exactly the numerical rank") {
  Rng rng(33);
  for (Eigen::Index dim = 1; dim <= 16; ++dim) {
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(
                                      rng.uniform() * static_cast<double>(dim));
    const Matrix r0 = rng.psd_rank(dim, rank);
    const double tr0 = r0.trace().real();
    StopRule stop;
    stop.max_steps = static_cast<int>(dim) + 2;
    stop.trace_tol = 1e-9 * tr0;
    StrategyConfig cfg;
    const ResidualChain chain =
        run_chain(r0, make_direction_source(cfg, dim), stop);
    CHECK(chain.steps.size() == static_cast<std::size_t>(rank));
    CHECK(chain.final_residual().trace().real() <= 1e-9 * tr0);
    if (rank > 1) {
      CHECK(chain.residuals[rank - 1].trace().real() > 1e-9 * tr0);
    }
  }
}

TEST_CASE("weak greedy screens the pool in order") {
  const Matrix r = matrix2(2, 0, 0, 1);
  StrategyConfig cfg;
  cfg.kind = StrategyKind::WeakGreedy;
  cfg.candidate_pool = {unit_basis_vector(2, 1), unit_basis_vector(2, 0)};

  cfg.c = 0.5;  // e_2 passes: 1 >= 0.5 * 2
  auto pick = weak_greedy_direction(r, cfg);
  CHECK((pick.direction - unit_basis_vector(2, 1)).norm() < 1e-14);
  CHECK(pick.quad_form == doctest::Approx(1.0));
  CHECK(pick.opnorm == doctest::Approx(2.0));

  cfg.c = 0.9;  // e_2 fails (1 < 1.8), e_1 passes
  pick = weak_greedy_direction(r, cfg);
  CHECK((pick.direction - unit_basis_vector(2, 0)).norm() < 1e-14);

  cfg.candidate_pool = {unit_basis_vector(2, 1)};
  CHECK_THROWS_AS(weak_greedy_direction(r, cfg), NoCandidateSatisfiesC);
}

TEST_CASE("weak greedy on the identity accepts any unit candidate") {
  Rng rng(34);
  StrategyConfig cfg;
  cfg.kind = StrategyKind::WeakGreedy;
  cfg.c = 1.0;
  cfg.candidate_pool = {rng.unit(3)};
  const auto pick = weak_greedy_direction(Matrix::Identity(3, 3), cfg);
  CHECK((pick.direction - cfg.candidate_pool[0]).norm() == 0.0);
  CHECK(pick.quad_form >= cfg.c * pick.opnorm - 1e-10);
}

TEST_CASE("weak greedy chain satisfies the norm-decay bound") {
  // Pool = standard basis with c = 0.2: the certificate and Cor-style
  // decay bound ||R_n|| <= energy_n / c must hold along the whole chain.
  const Eigen::Index dim = 4;
  StrategyConfig cfg;
  cfg.kind = StrategyKind::WeakGreedy;
  cfg.c = 0.2;
  for (Eigen::Index i = 0; i < dim; ++i) {
    cfg.candidate_pool.push_back(unit_basis_vector(dim, i));
  }
  Rng rng(35);
  Matrix r0 = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    r0(i, i) = Scalar(0.5 + rng.uniform(), 0.0);
  }
  StopRule stop;
  stop.max_steps = 50;
  const ResidualChain chain =
      run_chain(r0, make_direction_source(cfg, dim), stop);
  CHECK(chain.stop_reason == StopReason::ExactZero);
  double norm_before = opnorm(r0);
  for (const PhiStep& step : chain.steps) {
    CHECK(step.step_energy >= cfg.c * norm_before - 1e-10);
    CHECK(norm_before <= step.step_energy / cfg.c + 1e-10);
    CHECK(step.residual_opnorm_after <= norm_before + 1e-12);
    norm_before = step.residual_opnorm_after;
  }
}

TEST_CASE("cyclic basis directions sweep indefinitely") {
  const DirectionSource source = cyclic_basis_directions(3);
  const Matrix unused = Matrix::Zero(3, 3);
  const Eigen::Index expected[] = {0, 1, 2, 0, 1};
  for (int step = 0; step < 5; ++step) {
    const auto u = source(unused, step);
    REQUIRE(u.has_value());
    CHECK((*u - unit_basis_vector(3, expected[step])).norm() == 0.0);
  }
  const DirectionSource one = cyclic_basis_directions(1);
  for (int step = 0; step < 3; ++step) {
    CHECK((*one(Matrix::Zero(1, 1), step) - unit_basis_vector(1, 0)).norm() ==
          0.0);
  }
}

TEST_CASE("random sphere directions are unit, dense-style and reproducible") {
  const DirectionSource a = random_sphere_directions(5, 123);
  const DirectionSource b = random_sphere_directions(5, 123);
  const DirectionSource other = random_sphere_directions(5, 124);
  const Matrix unused = Matrix::Zero(5, 5);
  bool any_difference = false;
  for (int step = 0; step < 100; ++step) {
    const Vector ua = *a(unused, step);
    const Vector ub = *b(unused, step);
    CHECK(std::abs(ua.norm() - 1.0) <= 1e-12);
    CHECK((ua - ub).norm() == 0.0);
    any_difference = any_difference || (ua - *other(unused, step)).norm() > 0;
  }
  CHECK(any_difference);

  const DirectionSource scalar = random_sphere_directions(1, 9);
  for (int step = 0; step < 10; ++step) {
    CHECK(std::abs(std::abs((*scalar(Matrix::Zero(1, 1), step))(0)) - 1.0) <=
          1e-12);
  }
}

TEST_CASE("strategy validation rejects bad configurations") {
  StrategyConfig cfg;
  cfg.kind = StrategyKind::WeakGreedy;
  cfg.c = 0.0;
  cfg.candidate_pool = {unit_basis_vector(2, 0)};
  CHECK_THROWS_AS(validate_strategy(cfg), InvalidConfig);
  cfg.c = 1.5;
  CHECK_THROWS_AS(validate_strategy(cfg), InvalidConfig);
  cfg.c = 0.5;
  cfg.candidate_pool.clear();
  CHECK_THROWS_AS(validate_strategy(cfg), InvalidConfig);

  StrategyConfig explicit_cfg;
  explicit_cfg.kind = StrategyKind::ExplicitList;
  explicit_cfg.explicit_list = {
      Vector(2.0 * unit_basis_vector(2, 0))};  // not unit
  CHECK_THROWS_AS(validate_strategy(explicit_cfg), InvalidConfig);
}
