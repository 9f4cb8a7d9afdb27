#include <benchmark/benchmark.h>

#include <vector>

#include "cartelscreen/classical_screens.hpp"
#include "cartelscreen/rng.hpp"
#include "cartelscreen/stat_tests.hpp"
#include "cartelscreen/subgroup_screens.hpp"
#include "cartelscreen/tree.hpp"

namespace {

using namespace cartelscreen;

std::vector<double> lognormal_prices(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> prices(n);
  for (double& p : prices) p = rng.lognormal(4.6, 0.35);
  return prices;
}

void bm_classical_screens(benchmark::State& state) {
  const auto prices = lognormal_prices(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical_vector(prices));
  }
}
BENCHMARK(bm_classical_screens)->Arg(4)->Arg(12)->Arg(40);

void bm_subgroup_summary(benchmark::State& state) {
  const auto prices = lognormal_prices(state.range(0), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(subgroup_summary(prices));
  }
}
BENCHMARK(bm_subgroup_summary)->Arg(8)->Arg(16)->Arg(32);

void bm_mann_whitney(benchmark::State& state) {
  const auto x = lognormal_prices(state.range(0), 3);
  const auto y = lognormal_prices(state.range(0), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mann_whitney(x, y));
  }
}
BENCHMARK(bm_mann_whitney)->Arg(6)->Arg(50)->Arg(500);

void bm_ks_two_sample(benchmark::State& state) {
  const auto x = lognormal_prices(state.range(0), 5);
  const auto y = lognormal_prices(state.range(0), 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks_two_sample(x, y));
  }
}
BENCHMARK(bm_ks_two_sample)->Arg(50)->Arg(500);

void bm_fit_tree(benchmark::State& state) {
  const std::size_t n = state.range(0), p = 16;
  Rng rng(7);
  std::vector<std::vector<double>> x(n, std::vector<double>(p));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : x[i]) v = rng.normal();
    y[i] = rng.bernoulli(0.5) ? 1 : 0;
  }
  TreeOptions opt;
  opt.min_leaf = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_tree(x, y, opt));
  }
}
BENCHMARK(bm_fit_tree)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
