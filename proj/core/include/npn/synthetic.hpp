#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "npn/data_matrix.hpp"
#include "npn/gaussian.hpp"
#include "npn/graph.hpp"
#include "npn/rng.hpp"

namespace npn {

/// Parameters of the neighborhood-graph generator: p points on [0,1]^2,
/// pairwise edges with probability exp(-d^2/(2s))/sqrt(2*pi), degrees then
/// capped at max_degree.
struct GeneratorConfig {
  int p = 40;
  double s = 0.125;
  int max_degree = 4;
  Eigen::VectorXd mu0;  // resized to constant 1.5 when empty
  std::uint64_t seed = 0;

  void validate() const;
  Eigen::VectorXd resolved_mu0() const;
};

enum class TransformKind { identity, gaussian_cdf, power };

/// Marginal transform family used by the sampler: the Gaussian-cdf
/// transform g0 = Phi((t - mu_g0)/sigma_g0), the symmetric power transform
/// g0 = sign(t)|t|^alpha, or none.
struct TransformSpec {
  TransformKind kind = TransformKind::identity;
  double mu_g0 = 0.05;
  double sigma_g0 = 0.4;
  double alpha = 3.0;

  void validate() const;
};

/// Kernel probability for one pair at squared distance dist_sq; never
/// exceeds 1/sqrt(2*pi) ~ 0.3989, so it is a probability without clipping.
double edge_kernel_probability(double dist_sq, double s);

/// Full record of one generator draw, including what the degree cap removed.
struct NeighborhoodGraphDraw {
  GraphSpec graph;
  Eigen::MatrixX2d points;
  int edges_before_cap = 0;
  int removed_edges = 0;
  double expected_edges_before_cap = 0.0;  // sum of pairwise kernel probabilities
};

NeighborhoodGraphDraw neighborhood_graph_draw(const GeneratorConfig& config,
                                              Philox4x32& rng);
GraphSpec neighborhood_graph(const GeneratorConfig& config, Philox4x32& rng);

/// Precision matrix with unit diagonal, 0.245 on edges, zero elsewhere.
/// Requires max degree <= 4 (which keeps the matrix strictly diagonally
/// dominant) and verifies the smallest eigenvalue is positive.
Eigen::MatrixXd precision_from_graph(const GraphSpec& graph);

/// Column transform g_j built from a TransformSpec, normalized by
/// Gauss-Hermite quadrature so that g_j(Z_j) keeps mean mu_j and standard
/// deviation sigma_j when Z_j ~ N(mu_j, sigma_j^2). Strictly increasing.
class ColumnTransform {
 public:
  ColumnTransform(const TransformSpec& spec, double mu_j, double sigma_j, double center,
                  double scale)
      : spec_(spec), mu_(mu_j), sigma_(sigma_j), center_(center), scale_(scale) {}

  double operator()(double z) const;

  /// Inverse by bisection (the transform is strictly increasing).
  double inverse(double x, double lo = -64.0, double hi = 64.0) const;

 private:
  TransformSpec spec_;
  double mu_;
  double sigma_;
  double center_;
  double scale_;
};

ColumnTransform build_transform_g(const TransformSpec& spec, double mu_j, double sigma_j,
                                  const QuadratureRule& rule);

/// The module-wide fixed quadrature (Gauss-Hermite, 64 nodes).
const QuadratureRule& default_quadrature();

/// Draws n rows from N(mu0, sigma0) via the lower Cholesky factor; entries
/// are consumed from the stream in column-major order.
Eigen::MatrixXd mvn_sample(int n, const Eigen::VectorXd& mu0,
                           const Eigen::MatrixXd& sigma0, Philox4x32& rng);

/// Sample X ~ NPN(mu0, sigma0, f0): draws the latent Gaussian and applies
/// the per-column transform with sigma_j = sqrt(sigma0_jj). The identity
/// spec returns the Gaussian draw unchanged.
DataMatrix npn_sample(int n, const Eigen::VectorXd& mu0, const Eigen::MatrixXd& sigma0,
                      const TransformSpec& spec, Philox4x32& rng);

/// As npn_sample, but also exposes the latent Gaussian draw Z = f(X), the
/// oracle for covariance-deviation checks.
struct NpnDraw {
  DataMatrix observed;
  Eigen::MatrixXd latent;
};
NpnDraw npn_sample_with_latent(int n, const Eigen::VectorXd& mu0,
                               const Eigen::MatrixXd& sigma0, const TransformSpec& spec,
                               Philox4x32& rng);

}  // namespace npn
