#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "npn/covariance.hpp"
#include "npn/experiment.hpp"
#include "npn/glasso.hpp"
#include "npn/rng.hpp"
#include "npn/synthetic.hpp"

namespace {

npn::CovarianceEstimate synthetic_cov(int p, int n) {
  npn::Philox4x32 rng(7);
  npn::GeneratorConfig config;
  config.p = p;
  const npn::GraphSpec graph = npn::neighborhood_graph(config, rng);
  const Eigen::MatrixXd omega0 = npn::precision_from_graph(graph);
  Eigen::MatrixXd sigma0 = omega0.llt().solve(Eigen::MatrixXd::Identity(p, p));
  sigma0 = (0.5 * (sigma0 + sigma0.transpose())).eval();
  const npn::DataMatrix x =
      npn::npn_sample(n, Eigen::VectorXd::Constant(p, 1.5), sigma0, {}, rng);
  return npn::sample_covariance(x);
}

void GlassoSolve(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const npn::CovarianceEstimate S = synthetic_cov(p, 400);
  for (auto _ : state) {
    auto est = npn::glasso(S, 0.1);
    benchmark::DoNotOptimize(est.omega);
  }
}
BENCHMARK(GlassoSolve)->Arg(10)->Arg(20)->Arg(40);

void GlassoPath50(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const npn::CovarianceEstimate S = synthetic_cov(p, 400);
  const auto grid = npn::build_lambda_grid({}, &S.matrix);
  for (auto _ : state) {
    auto path = npn::regularization_path(S, grid);
    benchmark::DoNotOptimize(path.estimates);
  }
}
BENCHMARK(GlassoPath50)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
