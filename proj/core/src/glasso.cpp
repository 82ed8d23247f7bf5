#include "npn/glasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace npn {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

void check_square_symmetric(const CovarianceEstimate& S) {
  const auto& m = S.matrix;
  if (m.rows() != m.cols()) throw std::invalid_argument("glasso: S must be square");
  if (m.rows() < 1) throw std::invalid_argument("glasso: S is empty");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("glasso: S must be symmetric");
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    if (!(m(j, j) > 0.0))
      throw std::invalid_argument("glasso: S must have a strictly positive diagonal");
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  return Eigen::LLT<Eigen::MatrixXd>(m).info() == Eigen::Success;
}

// Feasible positive definite start for the dual when S itself is singular:
// shrink the off-diagonals toward zero, staying inside the lambda box.
Eigen::MatrixXd feasible_start(const Eigen::MatrixXd& S, double lambda) {
  double max_off = 0.0;
  const auto p = S.rows();
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index k = 0; k < j; ++k) max_off = std::max(max_off, std::abs(S(j, k)));
  if (max_off == 0.0) return S;  // diagonal S with positive entries is PD
  const double t = std::min(1.0, lambda / max_off);
  Eigen::MatrixXd W = (1.0 - t) * S;
  W.diagonal() = S.diagonal();
  return W;
}

double kkt_violation(const Eigen::MatrixXd& S, const Eigen::MatrixXd& W,
                     const Eigen::MatrixXd& omega, double lambda) {
  const auto p = S.rows();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    worst = std::max(worst, std::abs(S(j, j) - W(j, j)));
    for (Eigen::Index k = 0; k < j; ++k) {
      const double resid = S(j, k) - W(j, k);
      if (omega(j, k) == 0.0) {
        worst = std::max(worst, std::abs(resid) - lambda);
      } else {
        const double sign = omega(j, k) > 0.0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(resid + lambda * sign));
      }
    }
  }
  return std::max(worst, 0.0);
}

// Carries (W, B) between path levels so each lambda warm-starts from the
// previous solution.
struct SolverState {
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;  // B(k,j): lasso coefficient of variable k in column j's block
  bool valid = false;
};

PrecisionEstimate glasso_core(const Eigen::MatrixXd& S, double lambda,
                              const GlassoOptions& options, SolverState& state) {
  const int p = static_cast<int>(S.rows());

  if (!state.valid) {
    if (is_positive_definite(S)) {
      state.W = S;
    } else if (lambda > 0.0) {
      state.W = feasible_start(S, lambda);
      if (!is_positive_definite(state.W))
        throw std::runtime_error("glasso: could not construct a positive definite start");
    } else {
      throw std::runtime_error(
          "glasso: S is singular and lambda = 0; the unpenalized MLE does not exist");
    }
    state.B = Eigen::MatrixXd::Zero(p, p);
    state.valid = true;
  }

  Eigen::MatrixXd& W = state.W;
  Eigen::MatrixXd& B = state.B;

  PrecisionEstimate est;
  est.lambda = lambda;
  const int offdiag_count = p * (p - 1);

  // Precision implied by the block identities: omega_jj = 1/(w_jj - w_j'b_j),
  // omega_kj = -b_kj * omega_jj, then symmetrized.
  auto implied_omega = [&]() {
    Eigen::MatrixXd omega(p, p);
    for (int j = 0; j < p; ++j) {
      double dot = 0.0;
      for (int k = 0; k < p; ++k)
        if (k != j) dot += W(k, j) * B(k, j);
      const double omega_jj = 1.0 / (W(j, j) - dot);
      omega(j, j) = omega_jj;
      for (int k = 0; k < p; ++k)
        if (k != j) omega(k, j) = -B(k, j) * omega_jj;
    }
    return Eigen::MatrixXd(0.5 * (omega + omega.transpose()));
  };

  bool converged = false;
  int sweeps_done = 0;
  while (sweeps_done < options.max_sweeps) {
    double change_sum = 0.0;
    for (int j = 0; j < p; ++j) {
      // Inner lasso for column j:
      //   min_beta 1/2 beta' W11 beta - s12' beta + lambda ||beta||_1
      // with W11 = W without row/column j. q tracks W11 * beta on the
      // original index set (entry j unused).
      Eigen::VectorXd q = Eigen::VectorXd::Zero(p);
      for (int k = 0; k < p; ++k) {
        if (k == j || B(k, j) == 0.0) continue;
        const double beta_k = B(k, j);
        for (int l = 0; l < p; ++l)
          if (l != j) q(l) += W(l, k) * beta_k;
      }
      for (int pass = 0; pass < options.inner_max_passes; ++pass) {
        double max_step = 0.0;
        for (int k = 0; k < p; ++k) {
          if (k == j) continue;
          const double old = B(k, j);
          const double partial = S(k, j) - (q(k) - W(k, k) * old);
          const double updated = soft_threshold(partial, lambda) / W(k, k);
          if (updated != old) {
            const double step = updated - old;
            for (int l = 0; l < p; ++l)
              if (l != j) q(l) += W(l, k) * step;
            B(k, j) = updated;
            max_step = std::max(max_step, std::abs(step));
          }
        }
        if (max_step <= options.inner_tol) break;
      }
      for (int k = 0; k < p; ++k) {
        if (k == j) continue;
        change_sum += std::abs(q(k) - W(k, j));
        W(k, j) = q(k);
        W(j, k) = q(k);
      }
    }
    ++sweeps_done;

    // Per-sweep primal objective at the exact inverse of the covariance
    // iterate (always defined: W stays positive definite under the block
    // updates).
    {
      Eigen::LLT<Eigen::MatrixXd> llt(W);
      if (llt.info() == Eigen::Success) {
        const double log_det_w =
            2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        const Eigen::MatrixXd omega_w =
            llt.solve(Eigen::MatrixXd::Identity(p, p));
        double l1_off = 0.0;
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < j; ++k) l1_off += 2.0 * std::abs(omega_w(j, k));
        est.objective_history.push_back(omega_w.cwiseProduct(S).sum() + log_det_w +
                                        lambda * l1_off);
      }
    }

    if (change_sum / offdiag_count <= options.tol) {
      converged = true;
      break;
    }
  }

  est.omega = implied_omega();
  est.sigma = W;
  est.iterations = sweeps_done;
  est.converged = converged;
  est.max_kkt_violation = kkt_violation(S, est.sigma, est.omega, lambda);
  return est;
}

}  // namespace

double glasso_objective(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& S,
                        double lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("glasso_objective: omega is not positive definite");
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  double l1_off = 0.0;
  for (Eigen::Index j = 0; j < omega.rows(); ++j)
    for (Eigen::Index k = 0; k < j; ++k) l1_off += 2.0 * std::abs(omega(j, k));
  return omega.cwiseProduct(S).sum() - log_det + lambda * l1_off;
}

PrecisionEstimate glasso(const CovarianceEstimate& Scov, double lambda,
                         const GlassoOptions& options) {
  check_square_symmetric(Scov);
  if (lambda < 0.0) throw std::invalid_argument("glasso: lambda must be nonnegative");
  if (Scov.matrix.rows() == 1) {
    PrecisionEstimate est;
    est.omega = Eigen::MatrixXd::Constant(1, 1, 1.0 / Scov.matrix(0, 0));
    est.sigma = Scov.matrix;
    est.lambda = lambda;
    est.converged = true;
    return est;
  }
  SolverState state;
  return glasso_core(Scov.matrix, lambda, options, state);
}

PrecisionEstimate mle_inverse(const CovarianceEstimate& Scov) {
  check_square_symmetric(Scov);
  const Eigen::MatrixXd& S = Scov.matrix;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "mle_inverse: S is singular or indefinite; the MLE requires positive definite S "
        "(use lambda > 0 when p exceeds n)");
  const int p = static_cast<int>(S.rows());
  Eigen::MatrixXd omega = llt.solve(Eigen::MatrixXd::Identity(p, p));
  omega = (0.5 * (omega + omega.transpose())).eval();

  PrecisionEstimate est;
  est.omega = std::move(omega);
  est.sigma = S;
  est.lambda = 0.0;
  est.iterations = 0;
  est.converged = true;
  est.max_kkt_violation =
      (S * est.omega - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
  return est;
}

RegularizationPath regularization_path(const CovarianceEstimate& Scov,
                                       const std::vector<double>& lambdas,
                                       const GlassoOptions& options, double zero_tol) {
  check_square_symmetric(Scov);
  if (lambdas.empty())
    throw std::invalid_argument("regularization_path: empty lambda grid");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0)
      throw std::invalid_argument("regularization_path: negative lambda");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1]))
      throw std::invalid_argument("regularization_path: grid must be strictly decreasing");
  }

  RegularizationPath path;
  path.lambdas = lambdas;
  path.estimates.reserve(lambdas.size());
  path.edge_counts.reserve(lambdas.size());

  SolverState state;  // shared across levels: warm starts, largest lambda first
  for (double lambda : lambdas) {
    try {
      PrecisionEstimate est = glasso_core(Scov.matrix, lambda, options, state);
      path.edge_counts.push_back(edge_set(est, zero_tol).edge_count());
      path.estimates.push_back(std::move(est));
    } catch (const std::exception& e) {
      throw std::runtime_error("regularization_path: at lambda = " +
                               std::to_string(lambda) + ": " + e.what());
    }
  }
  return path;
}

GraphSpec edge_set(const PrecisionEstimate& estimate, double zero_tol) {
  const int p = static_cast<int>(estimate.omega.rows());
  GraphSpec graph(p);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < j; ++k)
      if (std::abs(estimate.omega(j, k)) > zero_tol) graph.add_edge(k, j);
  return graph;
}

}  // namespace npn
