#include <benchmark/benchmark.h>

#include <vector>

#include "kwlab/critical.hpp"
#include "kwlab/fixtures.hpp"
#include "kwlab/operators.hpp"
#include "kwlab/oracle.hpp"
#include "kwlab/sholo.hpp"

namespace {

using namespace kwlab;

EmbeddedGraph torus(int n) { return fixtures::square_torus(n, n, 0.3, 0.3); }

void BM_KacWardDeterminant(benchmark::State& state) {
  const EmbeddedGraph g = torus(static_cast<int>(state.range(0)));
  const Cochain phi = character_cochain(g, std::polar(1.0, 0.3), std::polar(1.0, -1.1));
  for (auto _ : state) benchmark::DoNotOptimize(det(kac_ward(g, phi).m));
  state.SetComplexityN(g.num_darts());
}
BENCHMARK(BM_KacWardDeterminant)->RangeMultiplier(2)->Range(2, 16)->Complexity();

void BM_TrackedSquareRoot(benchmark::State& state) {
  const EmbeddedGraph g = torus(static_cast<int>(state.range(0)));
  const Cochain phi = Cochain::trivial(g.num_darts());
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_det_tracked(g, phi).value);
}
BENCHMARK(BM_TrackedSquareRoot)->Arg(2)->Arg(4)->Arg(8);

void BM_SpectralGrid(benchmark::State& state) {
  const EmbeddedGraph g = torus(2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_grid(g, n));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SpectralGrid)->Arg(8)->Arg(32);

void BM_KasteleynMatrix(benchmark::State& state) {
  const CGraph c(torus(static_cast<int>(state.range(0))));
  const Cochain phi = Cochain::trivial(c.base().num_darts());
  for (auto _ : state) benchmark::DoNotOptimize(det(kasteleyn(c, phi, Orientation::reduced).m));
}
BENCHMARK(BM_KasteleynMatrix)->Arg(2)->Arg(4)->Arg(8);

void BM_EvenSubgraphSum(benchmark::State& state) {
  const EmbeddedGraph g = fixtures::square_torus(2, static_cast<int>(state.range(0)), 0.3, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::signed_cycle_sum(g));
}
BENCHMARK(BM_EvenSubgraphSum)->Arg(2)->Arg(3)->Arg(4);

void BM_Observable(benchmark::State& state) {
  const EmbeddedGraph g = fixtures::square_patch(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                                                 fixtures::kSquareCritical);
  for (auto _ : state) benchmark::DoNotOptimize(observable(g, 0, ObservableBackend::inverse_column));
}
BENCHMARK(BM_Observable)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
