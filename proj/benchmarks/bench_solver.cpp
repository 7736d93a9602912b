#include <benchmark/benchmark.h>

#include "drknn/distribution.hpp"
#include "drknn/eval.hpp"
#include "drknn/lfd.hpp"

namespace {

// LP size grows as M*n^2 + n in the total support size n, so per-class count
// is the knob that matters.
void BM_SolveLfd(benchmark::State& state) {
  const int per_class = static_cast<int>(state.range(0));
  const drknn::Dataset data = drknn::make_two_gaussians(per_class, 2.5, 0.0, 17);
  const drknn::RadiusVector radii = drknn::RadiusVector::Constant(2, 0.2);
  for (auto _ : state) {
    drknn::LfdSolution solution = drknn::solve_lfd(data, radii);
    benchmark::DoNotOptimize(solution.objective);
  }
  state.counters["support"] = 2.0 * per_class;
}

void BM_SolveLipschitz(benchmark::State& state) {
  const int per_class = static_cast<int>(state.range(0));
  const drknn::Dataset data = drknn::make_two_gaussians(per_class, 2.5, 0.0, 17);
  const std::vector<drknn::DistVector> empirical = drknn::empirical_distributions(data);
  const drknn::CostMatrix cost = drknn::euclidean_cost(data);
  const drknn::RadiusVector radii = drknn::RadiusVector::Constant(2, 0.2);
  for (auto _ : state) {
    drknn::LipschitzSolution solution = drknn::solve_lipschitz(empirical, cost, radii);
    benchmark::DoNotOptimize(solution.value);
  }
  state.counters["support"] = 2.0 * per_class;
}

}  // namespace

BENCHMARK(BM_SolveLfd)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveLipschitz)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
