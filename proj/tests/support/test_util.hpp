#pragma once

#include <Eigen/Dense>

#include "npn/covariance.hpp"
#include "npn/rng.hpp"

// Random symmetric positive definite matrix: (1/p) A A' + ridge I.
inline Eigen::MatrixXd random_pd_matrix(int p, npn::Philox4x32& rng, double ridge = 0.5) {
  Eigen::MatrixXd a(p, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) a(i, j) = rng.next_gaussian();
  Eigen::MatrixXd s = (a * a.transpose()) / p;
  s.diagonal().array() += ridge;
  return 0.5 * (s + s.transpose());
}

inline npn::CovarianceEstimate as_cov(Eigen::MatrixXd m, int n = 100) {
  return npn::CovarianceEstimate{std::move(m), npn::CovKind::covariance, n};
}
