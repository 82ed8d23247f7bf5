#include "npn/synthetic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace npn {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;
constexpr double kEdgeWeight = 0.245;
}  // namespace

void GeneratorConfig::validate() const {
  if (p < 2) throw std::invalid_argument("GeneratorConfig: p must be >= 2");
  if (!(s > 0.0)) throw std::invalid_argument("GeneratorConfig: s must be positive");
  if (max_degree < 1) throw std::invalid_argument("GeneratorConfig: max_degree must be >= 1");
  if (mu0.size() != 0 && mu0.size() != p)
    throw std::invalid_argument("GeneratorConfig: mu0 length must equal p");
}

Eigen::VectorXd GeneratorConfig::resolved_mu0() const {
  if (mu0.size() == p) return mu0;
  return Eigen::VectorXd::Constant(p, 1.5);
}

void TransformSpec::validate() const {
  if (kind == TransformKind::gaussian_cdf && !(sigma_g0 > 0.0))
    throw std::invalid_argument("TransformSpec: sigma_g0 must be positive");
  if (kind == TransformKind::power && !(alpha > 0.0))
    throw std::invalid_argument("TransformSpec: alpha must be positive");
}

double edge_kernel_probability(double dist_sq, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("edge_kernel_probability: s must be positive");
  if (dist_sq < 0.0) throw std::invalid_argument("edge_kernel_probability: negative distance");
  return kInvSqrt2Pi * std::exp(-dist_sq / (2.0 * s));
}

NeighborhoodGraphDraw neighborhood_graph_draw(const GeneratorConfig& config,
                                              Philox4x32& rng) {
  config.validate();
  const int p = config.p;

  NeighborhoodGraphDraw draw;
  draw.points.resize(p, 2);
  for (int j = 0; j < p; ++j) {
    draw.points(j, 0) = rng.next_uniform();
    draw.points(j, 1) = rng.next_uniform();
  }

  GraphSpec graph(p);
  for (int j = 0; j < p; ++j) {
    for (int k = j + 1; k < p; ++k) {
      const double dx = draw.points(j, 0) - draw.points(k, 0);
      const double dy = draw.points(j, 1) - draw.points(k, 1);
      const double prob = edge_kernel_probability(dx * dx + dy * dy, config.s);
      draw.expected_edges_before_cap += prob;
      if (rng.next_uniform() < prob) graph.add_edge(j, k);
    }
  }
  draw.edges_before_cap = graph.edge_count();

  // Degree cap: repeatedly pick a uniformly random edge among those touching
  // a currently maximum-degree vertex and drop it, until the cap holds.
  std::vector<int> degree = graph.degrees();
  while (true) {
    int dmax = 0;
    for (int d : degree) dmax = std::max(dmax, d);
    if (dmax <= config.max_degree) break;
    std::vector<std::pair<int, int>> candidates;
    for (const auto& e : graph.edges)
      if (degree[e.first] == dmax || degree[e.second] == dmax) candidates.push_back(e);
    const auto pick = candidates[rng.next_below(static_cast<std::uint32_t>(candidates.size()))];
    graph.edges.erase(pick);
    --degree[pick.first];
    --degree[pick.second];
    ++draw.removed_edges;
  }

  draw.graph = std::move(graph);
  return draw;
}

GraphSpec neighborhood_graph(const GeneratorConfig& config, Philox4x32& rng) {
  return neighborhood_graph_draw(config, rng).graph;
}

Eigen::MatrixXd precision_from_graph(const GraphSpec& graph) {
  if (graph.p < 1) throw std::invalid_argument("precision_from_graph: empty graph");
  if (graph.max_degree() > 4)
    throw std::invalid_argument(
        "precision_from_graph: max degree exceeds 4; 0.245 * degree could reach 1 and "
        "positive definiteness would be lost");
  Eigen::MatrixXd omega0 = Eigen::MatrixXd::Identity(graph.p, graph.p);
  for (const auto& [j, k] : graph.edges) {
    omega0(j, k) = kEdgeWeight;
    omega0(k, j) = kEdgeWeight;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(omega0);
  if (eig.info() != Eigen::Success || eig.eigenvalues()(0) <= 0.0)
    throw std::runtime_error("precision_from_graph: matrix is not positive definite");
  return omega0;
}

double ColumnTransform::operator()(double z) const {
  switch (spec_.kind) {
    case TransformKind::identity:
      return z;
    case TransformKind::gaussian_cdf: {
      const double g0 = std_normal_cdf((z - spec_.mu_g0) / spec_.sigma_g0);
      return mu_ + sigma_ * (g0 - center_) / scale_;
    }
    case TransformKind::power: {
      const double v = z - mu_;
      const double g0 = std::copysign(std::pow(std::abs(v), spec_.alpha), v);
      return mu_ + sigma_ * g0 / scale_;
    }
  }
  throw std::logic_error("ColumnTransform: unknown kind");
}

double ColumnTransform::inverse(double x, double lo, double hi) const {
  const auto& self = *this;
  if (!(self(lo) <= x && x <= self(hi)))
    throw std::domain_error("ColumnTransform::inverse: value outside bracket");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (self(mid) < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ColumnTransform build_transform_g(const TransformSpec& spec, double mu_j, double sigma_j,
                                  const QuadratureRule& rule) {
  spec.validate();
  if (!(sigma_j > 0.0))
    throw std::invalid_argument("build_transform_g: sigma_j must be positive");

  switch (spec.kind) {
    case TransformKind::identity:
      return ColumnTransform(spec, mu_j, sigma_j, 0.0, 1.0);
    case TransformKind::gaussian_cdf: {
      auto g0 = [&](double t) { return std_normal_cdf((t - spec.mu_g0) / spec.sigma_g0); };
      const double center = gaussian_weighted_integral(g0, mu_j, sigma_j, rule);
      const double var = gaussian_weighted_integral(
          [&](double t) {
            const double d = g0(t) - center;
            return d * d;
          },
          mu_j, sigma_j, rule);
      if (!(var > 0.0) || !std::isfinite(var))
        throw std::runtime_error("build_transform_g: degenerate cdf normalization");
      return ColumnTransform(spec, mu_j, sigma_j, center, std::sqrt(var));
    }
    case TransformKind::power: {
      const double second_moment = gaussian_weighted_integral(
          [&](double t) {
            const double v = std::pow(std::abs(t - mu_j), spec.alpha);
            return v * v;
          },
          mu_j, sigma_j, rule);
      if (!(second_moment > 0.0) || !std::isfinite(second_moment))
        throw std::runtime_error("build_transform_g: degenerate power normalization");
      return ColumnTransform(spec, mu_j, sigma_j, 0.0, std::sqrt(second_moment));
    }
  }
  throw std::logic_error("build_transform_g: unknown kind");
}

const QuadratureRule& default_quadrature() {
  static const QuadratureRule rule = gauss_hermite_rule(64);
  return rule;
}

Eigen::MatrixXd mvn_sample(int n, const Eigen::VectorXd& mu0,
                           const Eigen::MatrixXd& sigma0, Philox4x32& rng) {
  if (n < 2) throw std::invalid_argument("mvn_sample: n must be >= 2");
  const auto p = sigma0.rows();
  if (sigma0.cols() != p || mu0.size() != p)
    throw std::invalid_argument("mvn_sample: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma0);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mvn_sample: sigma0 is not positive definite");

  Eigen::MatrixXd xi(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) xi(i, j) = rng.next_gaussian();

  Eigen::MatrixXd z = xi * llt.matrixL().toDenseMatrix().transpose();
  z.rowwise() += mu0.transpose();
  return z;
}

NpnDraw npn_sample_with_latent(int n, const Eigen::VectorXd& mu0,
                               const Eigen::MatrixXd& sigma0, const TransformSpec& spec,
                               Philox4x32& rng) {
  spec.validate();
  NpnDraw draw;
  draw.latent = mvn_sample(n, mu0, sigma0, rng);

  draw.observed.values.resize(n, sigma0.rows());
  if (spec.kind == TransformKind::identity) {
    draw.observed.values = draw.latent;
    return draw;
  }
  const QuadratureRule& rule = default_quadrature();
  for (Eigen::Index j = 0; j < sigma0.rows(); ++j) {
    const auto g = build_transform_g(spec, mu0(j), std::sqrt(sigma0(j, j)), rule);
    for (int i = 0; i < n; ++i) draw.observed.values(i, j) = g(draw.latent(i, j));
  }
  return draw;
}

DataMatrix npn_sample(int n, const Eigen::VectorXd& mu0, const Eigen::MatrixXd& sigma0,
                      const TransformSpec& spec, Philox4x32& rng) {
  return npn_sample_with_latent(n, mu0, sigma0, spec, rng).observed;
}

}  // namespace npn
