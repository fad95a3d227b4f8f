#include <benchmark/benchmark.h>

#include <vector>

#include "logmap/density.hpp"
#include "logmap/map.hpp"
#include "logmap/quantifiers.hpp"
#include "logmap/random.hpp"
#include "logmap/thermo.hpp"

using namespace logmap;

namespace {

void BM_IterateOrbit(benchmark::State& state) {
  const MapParams p(3.9);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate_orbit(p, 0.3, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IterateOrbit)->Arg(1 << 16)->Arg(1 << 20);

void BM_InvariantDensity(benchmark::State& state) {
  const MapParams p(4.0);
  const auto w = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_invariant_density(p, 0.3, 1000000, w));
  }
  state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_InvariantDensity)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_UlamMatrix(benchmark::State& state) {
  const MapParams p(4.0);
  for (auto _ : state) benchmark::DoNotOptimize(ulam_transition_matrix(p, 100, 1000));
}
BENCHMARK(BM_UlamMatrix)->Unit(benchmark::kMillisecond);

void BM_TemperatureSeries(benchmark::State& state) {
  const MapParams p(3.7);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(temperature_series(p, 10000, 1000, 1, workers));
  state.SetItemsProcessed(state.iterations() * 10000 * 1000);
}
BENCHMARK(BM_TemperatureSeries)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_FisherInformation(benchmark::State& state) {
  Rng rng = make_rng(1);
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  double total = 0.0;
  for (double& v : p) total += v = uniform_open01(rng);
  for (double& v : p) v /= total;
  for (auto _ : state) benchmark::DoNotOptimize(fisher_information(p));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FisherInformation)->Arg(100)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
