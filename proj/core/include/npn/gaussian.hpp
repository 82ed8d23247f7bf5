#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace npn {

/// Standard Gaussian density (2*pi)^{-1/2} exp(-t^2/2).
double std_normal_pdf(double t);

/// Standard Gaussian distribution function, accurate over the full double
/// range (erfc-based, no cancellation in either tail).
double std_normal_cdf(double t);

/// Inverse of std_normal_cdf on (0,1).
///
/// Rational approximation followed by two Halley refinements; absolute error
/// below 1e-12 throughout [1e-8, 1-1e-8]. Arguments outside (0,1) throw
/// std::domain_error: callers are expected to Winsorize first.
double std_normal_quantile(double u);

/// Probability-weighted quadrature rule: nodes strictly increasing, weights
/// positive and normalized to sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

/// Gauss-Hermite rule for the standard Gaussian weight (probabilists'
/// convention), computed by the Golub-Welsch eigen decomposition of the
/// Jacobi matrix. Exact for polynomials of degree <= 2*order-1.
QuadratureRule gauss_hermite_rule(int order);

/// E[g(Z)] for Z ~ N(mu, sigma^2), i.e. the integral of
/// g(t) phi((t-mu)/sigma)/sigma over the real line.
template <class F>
double gaussian_weighted_integral(F&& g, double mu, double sigma, const QuadratureRule& rule) {
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
    throw std::invalid_argument("gaussian_weighted_integral: sigma must be positive and finite");
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double v = g(mu + sigma * rule.nodes[i]);
    if (!std::isfinite(v))
      throw std::runtime_error("gaussian_weighted_integral: integrand not finite at quadrature node");
    acc += rule.weights[i] * v;
  }
  return acc;
}

}  // namespace npn
