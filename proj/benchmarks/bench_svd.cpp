#include <rigidplan/rigidity.hpp>
#include <rigidplan/svd.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace rigidplan;

namespace {

// Rigidity matrix of a random framework with `points` UAV vertices.
RigidityMatrix random_matrix(int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  std::vector<UavVertex> vs;
  for (int i = 0; i < points; ++i) vs.push_back({Vec2(u(rng), u(rng)), static_cast<double>(i), i % 2});
  return build_rigidity_matrix(build_framework(vs, Vec2(0, 0)));
}

void BM_FullSvd(benchmark::State& state) {
  const auto R = random_matrix(static_cast<int>(state.range(0)), 1);
  const Index k = R.entries.cols();
  for (auto _ : state) benchmark::DoNotOptimize(full_svd(R.entries, k));
}

void BM_RandomizedSvd(benchmark::State& state) {
  const auto R = random_matrix(static_cast<int>(state.range(0)), 1);
  const Index k = R.entries.cols();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(randomized_svd(R.entries, k, ++seed));
}

void BM_SmoothSv(benchmark::State& state) {
  const auto R0 = random_matrix(static_cast<int>(state.range(0)), 1);
  const Index k = R0.entries.cols();
  const SvdResult anchor = full_svd(R0.entries, k);
  Eigen::MatrixXd R1 = R0.entries;
  R1.row(0) *= 1.001;
  const Index j = k - 3;
  for (auto _ : state) benchmark::DoNotOptimize(smooth_sv(anchor, R0.entries, R1, j));
}

}  // namespace

BENCHMARK(BM_FullSvd)->DenseRange(10, 50, 10);
BENCHMARK(BM_RandomizedSvd)->DenseRange(10, 50, 10);
BENCHMARK(BM_SmoothSv)->DenseRange(10, 50, 10);
