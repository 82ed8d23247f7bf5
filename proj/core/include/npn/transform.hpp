#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace npn {

/// Truncation level delta_n = 1 / (4 n^{1/4} sqrt(pi log n)); strictly
/// decreasing in n and inside (0, 1/2) for every n >= 2.
double truncation_level(int n);

/// Right-continuous empirical distribution function (1/n) #{i : x_i <= t}.
double empirical_cdf(const Eigen::Ref<const Eigen::VectorXd>& column, double t);

/// Empirical cdf clamped into [delta_n, 1 - delta_n].
double winsorized_cdf(const Eigen::Ref<const Eigen::VectorXd>& column, double t);

/// Per-column Winsorized-cdf transform: evaluation maps t to
/// mu_hat + sigma_hat * quantile(clamped ecdf(t)). Outputs are always finite
/// and confined to mu_hat +/- sigma_hat * quantile(1 - delta_n).
class MarginalTransform {
 public:
  MarginalTransform(std::vector<double> sorted_sample, double delta, double mu_hat,
                    double sigma_hat);

  /// f~(t): the estimated transformation on the original scale.
  double operator()(double t) const;

  /// h~(t) = quantile(winsorized ecdf(t)); depends on ranks and n only.
  double normalized(double t) const;

  double winsorized_cdf_at(double t) const;

  int n() const { return static_cast<int>(sorted_sample_.size()); }
  double delta() const { return delta_; }
  double mu_hat() const { return mu_hat_; }
  double sigma_hat() const { return sigma_hat_; }
  const std::vector<double>& sorted_sample() const { return sorted_sample_; }

 private:
  std::vector<double> sorted_sample_;
  double delta_;
  double mu_hat_;
  double sigma_hat_;
};

/// Fits the transform for one column: sorts the sample, computes the 1/n-
/// denominator moments, and wires in delta_n. A constant column (sigma_hat
/// = 0) is an error carrying `label` so callers can name the offender.
MarginalTransform fit_marginal_transform(const Eigen::Ref<const Eigen::VectorXd>& column,
                                         const std::string& label = {});

}  // namespace npn
