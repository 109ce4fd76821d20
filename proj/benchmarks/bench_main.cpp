#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cvm/critical_values.hpp"
#include "cvm/gil_pelaez.hpp"
#include "cvm/ranks.hpp"
#include "cvm/spectral.hpp"
#include "cvm/statistics.hpp"

namespace {

cvm::RankMatrix random_ranks(std::size_t n, std::size_t d,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  cvm::RankMatrix r;
  r.n = n;
  r.d = d;
  r.ranks.resize(n * d);
  std::vector<int> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i + 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) r.ranks[i * d + j] = perm[i];
  }
  return r;
}

void BM_SubsetStatistics(benchmark::State& state) {
  const auto r = random_ranks(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(cvm::subset_statistics(r, false));
}
BENCHMARK(BM_SubsetStatistics)->Args({100, 3})->Args({200, 3})->Args({200, 4});

void BM_GlobalStatistic(benchmark::State& state) {
  const auto r = random_ranks(static_cast<std::size_t>(state.range(0)), 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cvm::cvm_global(r));
}
BENCHMARK(BM_GlobalStatistic)->Arg(100)->Arg(200)->Arg(500);

void BM_BuildSpectrum(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(cvm::combination_null_spectrum(
        false, static_cast<int>(state.range(0)), false));
}
BENCHMARK(BM_BuildSpectrum)->Arg(3)->Arg(4)->Arg(5);

void BM_SurvivalInversion(benchmark::State& state) {
  const auto s = cvm::subset_null_spectrum(static_cast<int>(state.range(0)));
  const double x = 2.0 * s.mean();
  for (auto _ : state) benchmark::DoNotOptimize(cvm::survival(s, x));
}
BENCHMARK(BM_SurvivalInversion)->Arg(2)->Arg(3);

void BM_SpectralDraw(benchmark::State& state) {
  const auto s = cvm::subset_null_spectrum(2);
  std::mt19937_64 rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(rng));
}
BENCHMARK(BM_SpectralDraw);

void BM_CovarianceSamplerDraw(benchmark::State& state) {
  std::uint64_t seed = 4;
  for (auto _ : state)
    benchmark::DoNotOptimize(cvm::dm_draws(
        static_cast<std::size_t>(state.range(0)), cvm::Family::kFrank, 3,
        seed++, 1));
}
BENCHMARK(BM_CovarianceSamplerDraw)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
