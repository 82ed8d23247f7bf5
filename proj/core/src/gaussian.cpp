#include "npn/gaussian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace npn {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;
constexpr double kSqrt2 = 1.4142135623730950488016887242096980785696718753769;
}  // namespace

double std_normal_pdf(double t) {
  if (!std::isfinite(t)) throw std::domain_error("std_normal_pdf: non-finite argument");
  return kInvSqrt2Pi * std::exp(-0.5 * t * t);
}

double std_normal_cdf(double t) {
  if (!std::isfinite(t)) throw std::domain_error("std_normal_cdf: non-finite argument");
  return 0.5 * std::erfc(-t / kSqrt2);
}

namespace {

// Acklam's rational approximation to the Gaussian quantile,
// |relative error| < 1.15e-9 on (0,1). Refined below.
double quantile_seed(double u) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (u > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("std_normal_quantile: argument must lie strictly in (0,1)");
  double x = quantile_seed(u);
  // Two Halley steps against the erfc-based cdf.
  for (int step = 0; step < 2; ++step) {
    const double e = std_normal_cdf(x) - u;
    const double q = e / kInvSqrt2Pi * std::exp(0.5 * x * x);
    x -= q / (1.0 + 0.5 * x * q);
  }
  return x;
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");

  // Jacobi matrix of the (monic, probabilists') Hermite recurrence:
  // zero diagonal, off-diagonal sqrt(k).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: eigen decomposition failed");

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  double wsum = 0.0;
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
    wsum += rule.weights[i];
  }
  for (double& w : rule.weights) w /= wsum;

  // Enforce the +/- symmetry of the rule exactly; odd integrands then
  // cancel to round-off.
  for (int i = 0, j = order - 1; i < j; ++i, --j) {
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

}  // namespace npn
