#pragma once

#include <Eigen/Core>

#include <vector>

#include "npn/covariance.hpp"
#include "npn/graph.hpp"

namespace npn {

struct GlassoOptions {
  double tol = 1e-6;          // outer: mean |delta W| over off-diagonals
  int max_sweeps = 200;
  double inner_tol = 1e-7;    // inner lasso: max coordinate change per pass
  int inner_max_passes = 10000;
};

/// Solution of the l1-penalized log-determinant program at one lambda.
/// `sigma` is the solver's covariance iterate W; at convergence
/// omega * sigma ~ I and the KKT residuals below hold at tolerance.
struct PrecisionEstimate {
  Eigen::MatrixXd omega;
  Eigen::MatrixXd sigma;
  double lambda = 0.0;
  int iterations = 0;
  double max_kkt_violation = 0.0;
  bool converged = false;
  std::vector<double> objective_history;  // penalized neg. log-likelihood per sweep
};

/// Minimizes tr(Omega S) - log|Omega| + lambda * sum_{j != k} |Omega_jk|
/// by block coordinate descent over columns with an inner cyclic
/// coordinate-descent lasso. The penalty excludes the diagonal, so
/// W_jj = S_jj throughout.
///
/// lambda = 0 requires positive definite S (the unpenalized MLE);
/// otherwise a singularity error is thrown. Non-convergence within
/// max_sweeps returns the best iterate with converged = false.
PrecisionEstimate glasso(const CovarianceEstimate& S, double lambda,
                         const GlassoOptions& options = {});

/// Unpenalized MLE: the exact inverse via Cholesky. Throws on singular or
/// indefinite input.
PrecisionEstimate mle_inverse(const CovarianceEstimate& S);

struct RegularizationPath {
  std::vector<double> lambdas;              // strictly decreasing
  std::vector<PrecisionEstimate> estimates;
  std::vector<int> edge_counts;
};

/// Solves the program over a strictly decreasing grid, warm-starting each
/// level from the previous one (largest lambda first). Errors at a level are
/// rethrown annotated with that lambda.
RegularizationPath regularization_path(const CovarianceEstimate& S,
                                       const std::vector<double>& lambdas,
                                       const GlassoOptions& options = {},
                                       double zero_tol = 1e-8);

/// Edge set {(j,k) : |omega_jk| > zero_tol, j < k}.
GraphSpec edge_set(const PrecisionEstimate& estimate, double zero_tol = 1e-8);

/// The objective tr(Omega S) - log|Omega| + lambda * ||Omega||_{1,off}.
double glasso_objective(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& S,
                        double lambda);

}  // namespace npn
