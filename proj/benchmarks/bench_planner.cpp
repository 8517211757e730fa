#include <rigidplan/planner.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace rigidplan;

namespace {

PlanningState random_state(int points) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-150.0, 150.0);
  PlanningState s;
  for (int i = 0; i < points; ++i) s.history.push_back({Vec2(u(rng), u(rng)), static_cast<double>(i / 2), i % 2});
  s.uavs = {{0, Vec2(-125, -125), 45.0}, {1, Vec2(-125, -122.5), 40.0}};
  s.target_estimate = Vec2(10, -5);
  s.epoch = points / 2;
  return s;
}

void plan(benchmark::State& state, PlannerMode mode) {
  const PlanningState s = random_state(static_cast<int>(state.range(0)));
  PlannerConfig cfg;
  cfg.mode = mode;
  for (auto _ : state) benchmark::DoNotOptimize(select_waypoints(s, cfg));
}

void BM_PlanFull(benchmark::State& state) { plan(state, PlannerMode::FullSvd); }
void BM_PlanRandomized(benchmark::State& state) { plan(state, PlannerMode::Randomized); }
void BM_PlanSmooth(benchmark::State& state) { plan(state, PlannerMode::RandomizedSmooth); }

}  // namespace

BENCHMARK(BM_PlanFull)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanRandomized)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanSmooth)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
