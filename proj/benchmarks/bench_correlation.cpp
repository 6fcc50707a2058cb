#include <benchmark/benchmark.h>

#include <vector>

#include "metaeval/correlation.hpp"
#include "metaeval/rng.hpp"

namespace {

using namespace metaeval;

// Tie-dense vectors from a small integer alphabet, the shape the measures
// actually see after discretization.
std::vector<double> tie_dense(std::size_t n, std::uint64_t seed) {
  RngEngine rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(bounded_uint(rng, 13));
  return v;
}

void BM_Pearson(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = tie_dense(n, 1);
  const auto y = tie_dense(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pearson(x, y));
  }
}
BENCHMARK(BM_Pearson)->Arg(16)->Arg(100)->Arg(1600);

void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = tie_dense(n, 1);
  const auto y = tie_dense(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spearman(x, y));
  }
}
BENCHMARK(BM_Spearman)->Arg(16)->Arg(100)->Arg(1600);

void BM_KendallTauB(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = tie_dense(n, 1);
  const auto y = tie_dense(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kendall_tau_b(x, y));
  }
}
BENCHMARK(BM_KendallTauB)->Arg(16)->Arg(100)->Arg(1600);

void BM_FractionalRanks(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = tie_dense(n, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fractional_ranks(x));
  }
}
BENCHMARK(BM_FractionalRanks)->Arg(100)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();
