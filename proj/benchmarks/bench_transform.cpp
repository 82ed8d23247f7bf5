#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "npn/covariance.hpp"
#include "npn/gaussian.hpp"
#include "npn/rng.hpp"

namespace {

npn::DataMatrix gaussian_data(int n, int p) {
  npn::Philox4x32 rng(3);
  npn::DataMatrix data;
  data.values.resize(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) data.values(i, j) = rng.next_gaussian();
  return data;
}

void TransformedCovariance(benchmark::State& state) {
  const npn::DataMatrix data = gaussian_data(static_cast<int>(state.range(0)), 40);
  for (auto _ : state) {
    auto S = npn::transformed_covariance(data);
    benchmark::DoNotOptimize(S.matrix);
  }
}
BENCHMARK(TransformedCovariance)->Arg(200)->Arg(1000)->Arg(4000);

void StdNormalQuantile(benchmark::State& state) {
  double u = 1e-6;
  double acc = 0.0;
  for (auto _ : state) {
    acc += npn::std_normal_quantile(u);
    u += 1e-6;
    if (u >= 1.0) u -= 1.0 - 2e-6;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(StdNormalQuantile);

}  // namespace
