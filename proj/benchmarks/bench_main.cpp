#include <benchmark/benchmark.h>

#include <random>

#include "monitor/field.hpp"
#include "monitor/mission.hpp"
#include "monitor/planner.hpp"
#include "monitor/sogp.hpp"

namespace {

using namespace monitor;

SogpState make_state(int n, int capacity) {
  Hyperparameters h = Hyperparameters::manual2d();
  SogpConfig cfg;
  cfg.capacity = capacity;
  cfg.noise_var = h.sigma_n2();
  SogpState s(h, cfg);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < n; ++i) s.update(Point(u(rng), u(rng)), g(rng));
  return s;
}

void BM_SogpUpdate(benchmark::State& state) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::normal_distribution<double> g(0.0, 1.0);
  SogpState s = make_state(100, 100);
  for (auto _ : state) {
    auto out = s.update(Point(u(rng), u(rng)), g(rng));
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SogpUpdate);

void BM_MetricsFullMap(benchmark::State& state) {
  const auto field = synth_field(128, 128, 3, SynthKind::gaussian_blobs);
  SogpState s = make_state(100, 100);
  for (auto _ : state) {
    auto m = metrics(s, field, false);
    benchmark::DoNotOptimize(m.mse);
  }
}
BENCHMARK(BM_MetricsFullMap);

void BM_SelectWaypoints12x12(benchmark::State& state) {
  const auto field = synth_field(128, 128, 3, SynthKind::gaussian_blobs);
  const PlanGrid grid = build_plan_grid(field, 12, 12);
  SogpState s = make_state(100, 100);
  for (auto _ : state) {
    auto sel = select_waypoints(s, grid, 4);
    benchmark::DoNotOptimize(sel.objective);
  }
}
BENCHMARK(BM_SelectWaypoints12x12);

}  // namespace
