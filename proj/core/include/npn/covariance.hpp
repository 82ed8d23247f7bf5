#pragma once

#include <Eigen/Core>

#include "npn/data_matrix.hpp"

namespace npn {

enum class CovKind { covariance, correlation };

/// Symmetric p x p second-moment estimate with provenance: plain sample
/// covariance, Winsorized-transform covariance, or rank correlation.
struct CovarianceEstimate {
  Eigen::MatrixXd matrix;
  CovKind kind = CovKind::covariance;
  int n = 0;

  int p() const { return static_cast<int>(matrix.rows()); }
};

/// Covariance of the transformed sample: fits the Winsorized marginal
/// transform per column, materializes the transformed values once, then
/// accumulates the 1/n-centered Gram matrix.
CovarianceEstimate transformed_covariance(const DataMatrix& data);

/// Correlation of the normalized transforms quantile(winsorized ecdf).
/// Depends only on column ranks and n: applying any strictly increasing
/// per-column map leaves the result bitwise unchanged.
CovarianceEstimate transformed_correlation(const DataMatrix& data);

/// Plain sample covariance with the 1/n denominator (the Gaussian/paranormal
/// pipeline's input).
CovarianceEstimate sample_covariance(const DataMatrix& data);

/// The matrix of transformed values f~_j(x_ij), one column per marginal
/// transform; shares column labels with the input.
DataMatrix transformed_values(const DataMatrix& data);

}  // namespace npn
