#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "npn/covariance.hpp"
#include "npn/data_matrix.hpp"
#include "npn/glasso.hpp"
#include "npn/graph.hpp"

namespace npn {

struct ConfusionCounts {
  int fp = 0;
  int fn = 0;
  double lambda = 0.0;
};

/// Exact set-difference counts: fp = edges estimated but not true,
/// fn = edges true but not estimated.
ConfusionCounts fp_fn(const GraphSpec& truth, const GraphSpec& estimate,
                      double lambda = 0.0);

struct OracleResult {
  double lambda_star = 0.0;
  int score = 0;  // fp + fn at lambda_star
  std::vector<ConfusionCounts> per_level;
};

/// Scans the path for argmin of fp + fn; ties break toward the largest
/// lambda (the sparsest model).
OracleResult oracle_scan(const RegularizationPath& path, const GraphSpec& truth,
                         double zero_tol = 1e-8);

/// One point per level: (1 - fn/r, 1 - fp/(C(p,2) - r)). Degenerate truth
/// (r = 0 or r = C(p,2)) is an error.
std::vector<std::pair<double, double>> roc_points(const RegularizationPath& path,
                                                  const GraphSpec& truth,
                                                  double zero_tol = 1e-8);

/// (a \ b, b \ a): the two halves of the symmetric difference.
std::pair<GraphSpec, GraphSpec> symmetric_difference(const GraphSpec& a,
                                                     const GraphSpec& b);

/// Sample risk (1/2){tr(Omega S_n(f)) - log|Omega| - p log(2*pi)} with
/// S_n(f) the 1/n-centered covariance of the supplied transformed values.
double sample_risk(const DataMatrix& f_values, const PrecisionEstimate& omega);

/// Population risk (1/2)(tr(Sigma^{-1} Sigma0) + log|Sigma| - p log(2*pi)),
/// with the signs exactly as defined; callers should use differences, where
/// the constant term cancels.
double population_risk(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& sigma0);

/// max_{jk} |A_jk - B_jk| between two covariance estimates of equal shape.
double max_cov_deviation(const CovarianceEstimate& s_tilde,
                         const CovarianceEstimate& s_oracle);

/// Diagnostics of the irrepresentability condition on Gamma = Sigma0 (x)
/// Sigma0 with support S = {(i,j): Omega0(i,j) != 0} (diagonal included).
struct IrrepDiagnostics {
  double alpha_slack = 0.0;  // 1 - ||Gamma_{S^c S} Gamma_{SS}^{-1}||_inf
  double k_sigma = 0.0;      // ||Sigma0||_inf (max absolute row sum)
  double k_gamma = 0.0;      // ||Gamma_{SS}^{-1}||_inf
  int max_degree_d = 0;      // max row cardinality of Omega0's support
  double min_signal = 0.0;   // min over S of |Omega0(i,j)|
};

/// Exact computation from Omega0; forms p^2 x p^2 blocks, so p is guarded
/// at 60.
IrrepDiagnostics irrepresentability(const Eigen::MatrixXd& omega0, double zero_tol = 1e-8);

}  // namespace npn
