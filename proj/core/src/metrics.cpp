#include "npn/metrics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace npn {

namespace {

void require_same_p(const GraphSpec& a, const GraphSpec& b, const char* who) {
  if (a.p != b.p)
    throw std::invalid_argument(std::string(who) + ": graphs have different vertex counts");
}

double log_det_pd(const Eigen::MatrixXd& m, const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::domain_error(std::string(who) + ": matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

}  // namespace

ConfusionCounts fp_fn(const GraphSpec& truth, const GraphSpec& estimate, double lambda) {
  require_same_p(truth, estimate, "fp_fn");
  ConfusionCounts counts;
  counts.lambda = lambda;
  for (const auto& e : estimate.edges)
    if (!truth.edges.count(e)) ++counts.fp;
  for (const auto& e : truth.edges)
    if (!estimate.edges.count(e)) ++counts.fn;
  return counts;
}

OracleResult oracle_scan(const RegularizationPath& path, const GraphSpec& truth,
                         double zero_tol) {
  if (path.estimates.empty()) throw std::invalid_argument("oracle_scan: empty path");
  OracleResult result;
  result.per_level.reserve(path.estimates.size());
  int best_score = -1;
  for (std::size_t i = 0; i < path.estimates.size(); ++i) {
    const GraphSpec est = edge_set(path.estimates[i], zero_tol);
    const ConfusionCounts counts = fp_fn(truth, est, path.lambdas[i]);
    result.per_level.push_back(counts);
    const int score = counts.fp + counts.fn;
    // Strict < keeps the earliest (largest) lambda on ties.
    if (best_score < 0 || score < best_score) {
      best_score = score;
      result.lambda_star = path.lambdas[i];
      result.score = score;
    }
  }
  return result;
}

std::vector<std::pair<double, double>> roc_points(const RegularizationPath& path,
                                                  const GraphSpec& truth,
                                                  double zero_tol) {
  const int r = truth.edge_count();
  const long long total = static_cast<long long>(truth.p) * (truth.p - 1) / 2;
  if (r == 0 || r == total)
    throw std::invalid_argument("roc_points: degenerate truth (r = 0 or complete graph)");
  std::vector<std::pair<double, double>> points;
  points.reserve(path.estimates.size());
  for (std::size_t i = 0; i < path.estimates.size(); ++i) {
    const GraphSpec est = edge_set(path.estimates[i], zero_tol);
    const ConfusionCounts counts = fp_fn(truth, est, path.lambdas[i]);
    points.emplace_back(1.0 - static_cast<double>(counts.fn) / r,
                        1.0 - static_cast<double>(counts.fp) / (total - r));
  }
  return points;
}

std::pair<GraphSpec, GraphSpec> symmetric_difference(const GraphSpec& a,
                                                     const GraphSpec& b) {
  require_same_p(a, b, "symmetric_difference");
  GraphSpec a_minus_b(a.p);
  GraphSpec b_minus_a(a.p);
  for (const auto& e : a.edges)
    if (!b.edges.count(e)) a_minus_b.edges.insert(e);
  for (const auto& e : b.edges)
    if (!a.edges.count(e)) b_minus_a.edges.insert(e);
  return {std::move(a_minus_b), std::move(b_minus_a)};
}

double sample_risk(const DataMatrix& f_values, const PrecisionEstimate& omega) {
  f_values.validate();
  const int p = f_values.p();
  if (omega.omega.rows() != p)
    throw std::invalid_argument("sample_risk: dimension mismatch");
  const double log_det = log_det_pd(omega.omega, "sample_risk");

  Eigen::MatrixXd centered = f_values.values;
  centered.rowwise() -= centered.colwise().mean();
  Eigen::MatrixXd s_n = (centered.adjoint() * centered) / f_values.n();

  return 0.5 * (omega.omega.cwiseProduct(s_n).sum() - log_det -
                p * std::log(2.0 * M_PI));
}

double population_risk(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& sigma0) {
  if (sigma.rows() != sigma.cols() || sigma0.rows() != sigma0.cols() ||
      sigma.rows() != sigma0.rows())
    throw std::invalid_argument("population_risk: dimension mismatch");
  const auto p = sigma.rows();
  const double log_det = log_det_pd(sigma, "population_risk");
  log_det_pd(sigma0, "population_risk");  // PD requirement on sigma0 as well
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const Eigen::MatrixXd sigma_inv_sigma0 = llt.solve(sigma0);
  return 0.5 * (sigma_inv_sigma0.trace() + log_det -
                static_cast<double>(p) * std::log(2.0 * M_PI));
}

double max_cov_deviation(const CovarianceEstimate& s_tilde,
                         const CovarianceEstimate& s_oracle) {
  if (s_tilde.matrix.rows() != s_oracle.matrix.rows() ||
      s_tilde.matrix.cols() != s_oracle.matrix.cols())
    throw std::invalid_argument("max_cov_deviation: shape mismatch");
  return (s_tilde.matrix - s_oracle.matrix).cwiseAbs().maxCoeff();
}

IrrepDiagnostics irrepresentability(const Eigen::MatrixXd& omega0, double zero_tol) {
  const int p = static_cast<int>(omega0.rows());
  if (omega0.cols() != p) throw std::invalid_argument("irrepresentability: square input");
  if (p > 60)
    throw std::invalid_argument(
        "irrepresentability: p > 60 would need a " + std::to_string(p * p) + "^2 matrix");

  Eigen::LLT<Eigen::MatrixXd> llt(omega0);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("irrepresentability: omega0 is not positive definite");
  const Eigen::MatrixXd sigma0 = llt.solve(Eigen::MatrixXd::Identity(p, p));

  // Support of Omega0 over ordered index pairs (i,j), diagonal included;
  // pair (i,j) maps to flat index i*p + j.
  std::vector<int> support, complement;
  IrrepDiagnostics diag;
  diag.min_signal = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p; ++i) {
    int row_card = 0;
    for (int j = 0; j < p; ++j) {
      if (std::abs(omega0(i, j)) > zero_tol) {
        support.push_back(i * p + j);
        diag.min_signal = std::min(diag.min_signal, std::abs(omega0(i, j)));
        ++row_card;
      } else {
        complement.push_back(i * p + j);
      }
    }
    diag.max_degree_d = std::max(diag.max_degree_d, row_card);
  }
  if (support.empty())
    throw std::invalid_argument("irrepresentability: empty support");

  // Gamma = Sigma0 (x) Sigma0 restricted to the needed blocks:
  // Gamma[(a,b),(c,d)] = Sigma0(a,c) * Sigma0(b,d).
  auto gamma_entry = [&](int row, int col) {
    const int a = row / p, b = row % p, c = col / p, d = col % p;
    return sigma0(a, c) * sigma0(b, d);
  };
  const int ns = static_cast<int>(support.size());
  const int nc = static_cast<int>(complement.size());
  Eigen::MatrixXd gamma_ss(ns, ns);
  for (int r = 0; r < ns; ++r)
    for (int c = 0; c < ns; ++c) gamma_ss(r, c) = gamma_entry(support[r], support[c]);

  const Eigen::MatrixXd gamma_ss_inv =
      gamma_ss.partialPivLu().solve(Eigen::MatrixXd::Identity(ns, ns));
  diag.k_gamma = gamma_ss_inv.cwiseAbs().rowwise().sum().maxCoeff();
  diag.k_sigma = sigma0.cwiseAbs().rowwise().sum().maxCoeff();

  if (nc == 0) {
    diag.alpha_slack = 1.0;  // Gamma_{S^c S} is empty
    return diag;
  }
  Eigen::MatrixXd gamma_cs(nc, ns);
  for (int r = 0; r < nc; ++r)
    for (int c = 0; c < ns; ++c) gamma_cs(r, c) = gamma_entry(complement[r], support[c]);
  const Eigen::MatrixXd product = gamma_cs * gamma_ss_inv;
  diag.alpha_slack = 1.0 - product.cwiseAbs().rowwise().sum().maxCoeff();
  return diag;
}

}  // namespace npn
