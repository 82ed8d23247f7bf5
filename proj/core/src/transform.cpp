#include "npn/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "npn/gaussian.hpp"

namespace npn {

double truncation_level(int n) {
  if (n < 2) throw std::domain_error("truncation_level: n must be >= 2");
  const double nd = static_cast<double>(n);
  return 1.0 / (4.0 * std::pow(nd, 0.25) * std::sqrt(M_PI * std::log(nd)));
}

namespace {

double ecdf_sorted(const std::vector<double>& sorted, double t) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

}  // namespace

double empirical_cdf(const Eigen::Ref<const Eigen::VectorXd>& column, double t) {
  const auto n = column.size();
  if (n == 0) throw std::domain_error("empirical_cdf: empty column");
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (column(i) <= t) ++count;
  return static_cast<double>(count) / static_cast<double>(n);
}

double winsorized_cdf(const Eigen::Ref<const Eigen::VectorXd>& column, double t) {
  const double delta = truncation_level(static_cast<int>(column.size()));
  return std::clamp(empirical_cdf(column, t), delta, 1.0 - delta);
}

MarginalTransform::MarginalTransform(std::vector<double> sorted_sample, double delta,
                                     double mu_hat, double sigma_hat)
    : sorted_sample_(std::move(sorted_sample)),
      delta_(delta),
      mu_hat_(mu_hat),
      sigma_hat_(sigma_hat) {}

double MarginalTransform::winsorized_cdf_at(double t) const {
  return std::clamp(ecdf_sorted(sorted_sample_, t), delta_, 1.0 - delta_);
}

double MarginalTransform::normalized(double t) const {
  return std_normal_quantile(winsorized_cdf_at(t));
}

double MarginalTransform::operator()(double t) const {
  return mu_hat_ + sigma_hat_ * normalized(t);
}

MarginalTransform fit_marginal_transform(const Eigen::Ref<const Eigen::VectorXd>& column,
                                         const std::string& label) {
  const int n = static_cast<int>(column.size());
  if (n < 2) throw std::domain_error("fit_marginal_transform: need at least 2 observations");
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(column(i)))
      throw std::domain_error("fit_marginal_transform: non-finite observation in column " +
                              (label.empty() ? std::string("?") : label));

  const double mu = column.mean();
  const double sigma = std::sqrt((column.array() - mu).square().sum() / n);
  if (!(sigma > 0.0)) {
    const std::string who = label.empty() ? std::string("<unnamed>") : label;
    throw std::domain_error("fit_marginal_transform: column " + who +
                            " is constant (sigma_hat = 0)");
  }

  std::vector<double> sorted(column.data(), column.data() + n);
  std::sort(sorted.begin(), sorted.end());
  return MarginalTransform(std::move(sorted), truncation_level(n), mu, sigma);
}

}  // namespace npn
