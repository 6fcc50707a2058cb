#include <benchmark/benchmark.h>

#include <vector>

#include "metaeval/dataset.hpp"
#include "metaeval/measures.hpp"
#include "metaeval/perm_test.hpp"
#include "metaeval/rng.hpp"
#include "metaeval/simulation.hpp"

namespace {

using namespace metaeval;

ScoreMatrix random_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
  RngEngine rng(seed);
  std::vector<std::string> sys_ids, in_ids;
  for (std::size_t i = 0; i < n; ++i) sys_ids.push_back("s" + std::to_string(i));
  for (std::size_t j = 0; j < m; ++j) in_ids.push_back("d" + std::to_string(j));
  std::vector<double> v(n * m);
  for (double& x : v) x = uniform01(rng);
  return ScoreMatrix(sys_ids, in_ids, v);
}

void BM_EvaluateAll12(benchmark::State& state) {
  const ScoreMatrix x = random_matrix(16, 100, 1);
  const ScoreMatrix z = random_matrix(16, 100, 2);
  for (auto _ : state) {
    for (const Measure& m : all_measures()) {
      benchmark::DoNotOptimize(evaluate(m, x, z));
    }
  }
}
BENCHMARK(BM_EvaluateAll12);

void BM_PermBothGlobalPearson(benchmark::State& state) {
  const ScoreMatrix x = random_matrix(16, 100, 1);
  const ScoreMatrix y = random_matrix(16, 100, 2);
  const ScoreMatrix z = random_matrix(16, 100, 3);
  const Measure m{Grouping::Global, CoefKind::Pearson};
  const PermTestConfig cfg{static_cast<std::uint32_t>(state.range(0)), 7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(perm_both(x, y, z, m, cfg));
  }
}
BENCHMARK(BM_PermBothGlobalPearson)->Arg(100);

void BM_SimulateOneOuter(benchmark::State& state) {
  SimulationParams params;
  params.T1 = 1;
  params.T2 = static_cast<std::uint32_t>(state.range(0));
  params.seed = 11;
  const auto& measures = all_measures();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(params, {measures.data(), measures.size()}));
  }
}
BENCHMARK(BM_SimulateOneOuter)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
