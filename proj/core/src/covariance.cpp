#include "npn/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "npn/gaussian.hpp"
#include "npn/transform.hpp"

namespace npn {

namespace {

// Gram matrix (1/n) Yc' Yc of the centered columns, built through a
// selfadjoint rank update so the result is symmetric bitwise.
Eigen::MatrixXd centered_gram(Eigen::MatrixXd values) {
  const auto n = values.rows();
  values.rowwise() -= values.colwise().mean();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(values.cols(), values.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(values.adjoint(),
                                                  1.0 / static_cast<double>(n));
  gram.triangularView<Eigen::Upper>() = gram.adjoint();
  return gram;
}

// h~ values for one column: quantile of the Winsorized ecdf, computed from
// the sorted copy so ties share a value.
Eigen::VectorXd normalized_column(const Eigen::Ref<const Eigen::VectorXd>& column,
                                  double delta) {
  const auto n = column.size();
  std::vector<double> sorted(column.data(), column.data() + n);
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), column(i));
    const double ecdf = static_cast<double>(it - sorted.begin()) / static_cast<double>(n);
    out(i) = std_normal_quantile(std::clamp(ecdf, delta, 1.0 - delta));
  }
  return out;
}

}  // namespace

DataMatrix transformed_values(const DataMatrix& data) {
  data.validate();
  DataMatrix out;
  out.names = data.names;
  out.values.resize(data.n(), data.p());
  for (int j = 0; j < data.p(); ++j) {
    const auto transform = fit_marginal_transform(data.values.col(j), data.col_label(j));
    for (int i = 0; i < data.n(); ++i) out.values(i, j) = transform(data.values(i, j));
  }
  return out;
}

CovarianceEstimate transformed_covariance(const DataMatrix& data) {
  const DataMatrix f_values = transformed_values(data);
  return CovarianceEstimate{centered_gram(f_values.values), CovKind::covariance, data.n()};
}

CovarianceEstimate transformed_correlation(const DataMatrix& data) {
  data.validate();
  const int n = data.n();
  const int p = data.p();
  const double delta = truncation_level(n);

  Eigen::MatrixXd h(n, p);
  for (int j = 0; j < p; ++j) {
    // Reject degenerate columns up front; h~ of a constant column would
    // silently collapse to a single value.
    Eigen::VectorXd col = data.values.col(j);
    if (col.minCoeff() == col.maxCoeff())
      throw std::domain_error("transformed_correlation: column " + data.col_label(j) +
                              " is constant (sigma_hat = 0)");
    h.col(j) = normalized_column(col, delta);
  }

  Eigen::MatrixXd cov = centered_gram(std::move(h));
  Eigen::MatrixXd corr(p, p);
  for (int j = 0; j < p; ++j) {
    corr(j, j) = 1.0;
    for (int k = 0; k < j; ++k) {
      const double r = cov(j, k) / std::sqrt(cov(j, j) * cov(k, k));
      corr(j, k) = r;
      corr(k, j) = r;
    }
  }
  return CovarianceEstimate{std::move(corr), CovKind::correlation, n};
}

CovarianceEstimate sample_covariance(const DataMatrix& data) {
  data.validate();
  return CovarianceEstimate{centered_gram(data.values), CovKind::covariance, data.n()};
}

}  // namespace npn
