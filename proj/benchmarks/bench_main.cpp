// Microbenchmarks for the numeric hot paths: transform, fingerprint,
// decomposition, and pairwise distances.
#include <benchmark/benchmark.h>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <netfp/reduction.hpp>
#include <netfp/rng.hpp>
#include <netfp/similarity.hpp>
#include <netfp/spectrum.hpp>
#include <netfp/synth.hpp>

namespace {

using namespace netfp;

void bm_fft(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  spectrum::ComplexVector x(n);
  for (auto& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::fft(x));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(bm_fft)->RangeMultiplier(4)->Range(64, 2048)->Complexity(benchmark::oNLogN);

void bm_fingerprint(benchmark::State& state) {
  synth::SignalParams params;
  params.diurnal = {{7.0, 0.45, 0.3}, {14.0, 0.2, 1.1}};
  params.noise_sigma = 20.0;
  params.seed = 7;
  ingest::EvolutionWindow window =
      synth::generate_weekly(params, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum::fingerprint(window));
}
BENCHMARK(bm_fingerprint)->Arg(512)->Arg(2048);

void bm_svd(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = static_cast<std::size_t>(state.range(1));
  Rng rng(2);
  Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(reduction::svd(m));
}
BENCHMARK(bm_svd)->Args({256, 16})->Args({512, 40})->Args({2048, 64});

void bm_pdist(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<reduction::ReducedFeature> features;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> coords(40);
    for (double& v : coords) v = rng.uniform(-1.0, 1.0);
    features.push_back({"e" + std::to_string(i), std::move(coords)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(similarity::pdist(features));
}
BENCHMARK(bm_pdist)->Arg(17)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
