#include <benchmark/benchmark.h>

#include <vector>

#include "drknn/classify.hpp"
#include "drknn/eval.hpp"

namespace {

drknn::Dataset pool(int per_class) { return drknn::make_two_gaussians(per_class, 2.5, 0.2, 29); }

// Brute-force scan plus full sort; the in-contract path for desk-scale pools.
void BM_NeighborOrder(benchmark::State& state) {
  const drknn::Dataset train = pool(static_cast<int>(state.range(0)));
  const Eigen::VectorXd query = Eigen::VectorXd::Zero(train.dim());
  for (auto _ : state) {
    std::vector<int> order = drknn::neighbor_order(train, query);
    benchmark::DoNotOptimize(order.data());
  }
  state.counters["points"] = static_cast<double>(train.size());
}

void BM_DrknnVotes(benchmark::State& state) {
  const drknn::Dataset train = pool(static_cast<int>(state.range(0)));
  const int n = train.size();
  std::vector<drknn::DistVector> lfds(2, drknn::DistVector::Constant(n, 1.0 / n));
  const std::vector<int> order = drknn::neighbor_order(train, Eigen::VectorXd::Zero(train.dim()));
  for (auto _ : state) {
    drknn::VoteVector votes = drknn::drknn_votes(lfds, order, 5);
    benchmark::DoNotOptimize(votes.data());
  }
}

void BM_VanillaVotes(benchmark::State& state) {
  const drknn::Dataset train = pool(static_cast<int>(state.range(0)));
  const std::vector<int> order = drknn::neighbor_order(train, Eigen::VectorXd::Zero(train.dim()));
  for (auto _ : state) {
    drknn::VoteVector votes = drknn::vanilla_knn_votes(train, order, 5);
    benchmark::DoNotOptimize(votes.data());
  }
}

}  // namespace

BENCHMARK(BM_NeighborOrder)->Arg(50)->Arg(150)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DrknnVotes)->Arg(50)->Arg(150)->Arg(500)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VanillaVotes)->Arg(50)->Arg(150)->Arg(500)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
