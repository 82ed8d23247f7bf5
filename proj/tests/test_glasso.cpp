#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "npn/glasso.hpp"
#include "npn/rng.hpp"
#include "support/admm_oracle.hpp"
#include "support/test_util.hpp"

using namespace npn;

namespace {

const GlassoOptions kTight{1e-10, 2000, 1e-12, 100000};

}  // namespace

TEST_SUITE_BEGIN("glasso");

TEST_CASE("large lambda yields the decoupled diagonal solution") {
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.5, 0.5, 1.0;
  for (double lambda : {0.5, 0.7, 2.0}) {
    const PrecisionEstimate est = glasso(as_cov(S), lambda, kTight);
    CHECK(est.converged);
    CHECK(est.omega(0, 1) == 0.0);
    CHECK(est.omega(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.omega(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lambda zero reproduces the inverse") {
  Philox4x32 rng(314);
  for (int p : {2, 3, 5, 8}) {
    const Eigen::MatrixXd S = random_pd_matrix(p, rng);
    const PrecisionEstimate est = glasso(as_cov(S), 0.0, kTight);
    const Eigen::MatrixXd inv = S.llt().solve(Eigen::MatrixXd::Identity(p, p));
    CHECK((est.omega - inv).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((est.omega * S - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("agrees with the ADMM oracle on small problems") {
  Philox4x32 rng(2718);
  for (int trial = 0; trial < 6; ++trial) {
    const int p = 3 + (trial % 3);
    const Eigen::MatrixXd S = random_pd_matrix(p, rng);
    for (double lambda : {0.1, 0.03}) {
      const PrecisionEstimate est = glasso(as_cov(S), lambda, kTight);
      const Eigen::MatrixXd oracle = admm_glasso_oracle(S, lambda);
      CHECK((est.omega - oracle).cwiseAbs().maxCoeff() <= 1e-4);
      CHECK(est.max_kkt_violation <= 1e-6);
    }
  }
}

TEST_CASE("KKT certificate is reported") {
  Philox4x32 rng(5);
  const Eigen::MatrixXd S = random_pd_matrix(6, rng);
  const PrecisionEstimate est = glasso(as_cov(S), 0.08, kTight);
  CHECK(est.converged);
  CHECK(est.max_kkt_violation <= kTight.tol * 100);
  // diagonal of W pinned to S
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(est.sigma(j, j) - S(j, j)) <= 1e-12);
  // omega * sigma ~ I at convergence
  CHECK((est.omega * est.sigma - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <=
        1e-6);
}

TEST_CASE("objective is monotone across sweeps") {
  Philox4x32 rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::MatrixXd S = random_pd_matrix(10, rng, 0.3);
    const PrecisionEstimate est = glasso(as_cov(S), 0.05, kTight);
    REQUIRE(est.objective_history.size() >= 1);
    for (std::size_t i = 1; i < est.objective_history.size(); ++i)
      CHECK(est.objective_history[i] <= est.objective_history[i - 1] + 1e-9);
  }
}

TEST_CASE("permutation equivariance") {
  Philox4x32 rng(123);
  const int p = 7;
  const Eigen::MatrixXd S = random_pd_matrix(p, rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(p);
  perm.setIdentity();
  // deterministic shuffle of the permutation indices
  for (int i = p - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(i + 1));
    std::swap(perm.indices()(i), perm.indices()(j));
  }
  const Eigen::MatrixXd S_perm = perm * S * perm.transpose();

  const PrecisionEstimate base = glasso(as_cov(S), 0.07, kTight);
  const PrecisionEstimate permuted = glasso(as_cov(S_perm), 0.07, kTight);
  const Eigen::MatrixXd expected = perm * base.omega * perm.transpose();
  CHECK((permuted.omega - expected).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("scale homogeneity") {
  Philox4x32 rng(99);
  const Eigen::MatrixXd S = random_pd_matrix(5, rng);
  const double c = 2.0;
  const PrecisionEstimate base = glasso(as_cov(S), 0.1, kTight);
  const PrecisionEstimate scaled = glasso(as_cov((c * S).eval()), c * 0.1, kTight);
  CHECK((scaled.omega - base.omega / c).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("two-by-two closed form for W12") {
  Eigen::MatrixXd S(2, 2);
  S << 1.3, -0.6, -0.6, 0.9;
  const double lambda = 0.25;  // below |S12|
  const PrecisionEstimate est = glasso(as_cov(S), lambda, kTight);
  const double expected = -(0.6 - lambda);  // sign(S12) (|S12| - lambda)
  CHECK(est.sigma(0, 1) == doctest::Approx(expected).epsilon(1e-10));
  const Eigen::MatrixXd oracle = admm_glasso_oracle(S, lambda);
  CHECK((est.omega - oracle).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("singular S with lambda zero is an error") {
  Eigen::MatrixXd S(3, 3);
  S.setOnes();  // rank one
  CHECK_THROWS_AS(glasso(as_cov(S), 0.0), std::runtime_error);
  CHECK_THROWS_AS(mle_inverse(as_cov(S)), std::runtime_error);
  // but a positive penalty still solves
  const PrecisionEstimate est = glasso(as_cov(S), 0.5, kTight);
  CHECK(est.converged);
}

TEST_CASE("mle_inverse closed forms") {
  CHECK((mle_inverse(as_cov(Eigen::MatrixXd::Identity(4, 4))).omega -
         Eigen::MatrixXd::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  Eigen::MatrixXd D = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const PrecisionEstimate diag_est = mle_inverse(as_cov(D));
  CHECK(diag_est.omega(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(diag_est.omega(1, 1) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(diag_est.omega(0, 1) == 0.0);

  Eigen::MatrixXd S(2, 2);
  S << 2.0, 1.0, 1.0, 2.0;
  const PrecisionEstimate est = mle_inverse(as_cov(S));
  Eigen::MatrixXd expected(2, 2);
  expected << 2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0;
  CHECK((est.omega - expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((est.omega * S - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("path basics and warm-start consistency") {
  Philox4x32 rng(1011);
  const Eigen::MatrixXd S = random_pd_matrix(10, rng, 0.2);

  double max_off = 0.0;
  for (int j = 0; j < 10; ++j)
    for (int k = 0; k < j; ++k) max_off = std::max(max_off, std::abs(S(j, k)));

  SUBCASE("grid starting at max off-diagonal is diagonal") {
    const RegularizationPath path =
        regularization_path(as_cov(S), {max_off * 1.0000001, max_off * 0.5}, kTight);
    CHECK(path.edge_counts[0] == 0);
  }

  SUBCASE("single-element grid equals one glasso call") {
    const RegularizationPath path = regularization_path(as_cov(S), {0.1}, kTight);
    const PrecisionEstimate direct = glasso(as_cov(S), 0.1, kTight);
    CHECK((path.estimates[0].omega - direct.omega).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("warm starts match cold starts per level") {
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(max_off * std::pow(0.65, i));
    const RegularizationPath path = regularization_path(as_cov(S), grid, kTight);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const PrecisionEstimate cold = glasso(as_cov(S), grid[i], kTight);
      CHECK((path.estimates[i].omega - cold.omega).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }

  SUBCASE("grid validation") {
    CHECK_THROWS_AS(regularization_path(as_cov(S), {}), std::invalid_argument);
    CHECK_THROWS_AS(regularization_path(as_cov(S), {0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(regularization_path(as_cov(S), {0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(regularization_path(as_cov(S), {0.1, -0.2}), std::invalid_argument);
  }
}

TEST_CASE("edge extraction") {
  PrecisionEstimate est;
  est.omega = Eigen::MatrixXd::Identity(3, 3);
  est.converged = true;
  CHECK(edge_set(est).edge_count() == 0);

  est.omega(0, 1) = est.omega(1, 0) = -0.3;
  const GraphSpec graph = edge_set(est, 1e-8);
  CHECK(graph.edge_count() == 1);
  CHECK(graph.has_edge(0, 1));

  // crossing lambda over the soft-threshold boundary changes the edge count
  Eigen::MatrixXd S(2, 2);
  S << 1.0, 0.5, 0.5, 1.0;
  const PrecisionEstimate sparse = glasso(as_cov(S), 0.51, kTight);
  const PrecisionEstimate dense = glasso(as_cov(S), 0.49, kTight);
  CHECK(edge_set(dense).edge_count() - edge_set(sparse).edge_count() >= 1);
}

TEST_CASE("input validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.2, 0.4, 1.0;  // asymmetric
  CHECK_THROWS_AS(glasso(as_cov(bad), 0.1), std::invalid_argument);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(2, 2);
  neg(1, 1) = 0.0;
  CHECK_THROWS_AS(glasso(as_cov(neg), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(glasso(as_cov(Eigen::MatrixXd::Identity(2, 2)), -0.1),
                  std::invalid_argument);
}

TEST_SUITE_END();
