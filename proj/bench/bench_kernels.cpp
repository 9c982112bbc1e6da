// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "inside/embedding.hpp"
#include "inside/kernels.hpp"
#include "inside/random.hpp"

namespace {

using namespace inside;

RowMatrix unit_rows(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> n;
  RowMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vector v(cols);
    for (auto& x : v) x = n(rng);
    v = normalize(v);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

template <auto Kernel>
void BM_rank(benchmark::State& state) {
  const auto m = unit_rows(static_cast<std::size_t>(state.range(0)), 256, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(m, 16));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Kernel>
void BM_energy(benchmark::State& state) {
  const auto x = unit_rows(static_cast<std::size_t>(state.range(0)), 64, 2);
  const auto y = unit_rows(static_cast<std::size_t>(state.range(0)), 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, y));
}

template <auto Kernel>
void BM_nearest(benchmark::State& state) {
  const auto probes = unit_rows(static_cast<std::size_t>(state.range(0)), 64, 4);
  const auto bank = unit_rows(static_cast<std::size_t>(state.range(0)), 64, 5);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(probes, bank));
}

}  // namespace

BENCHMARK(BM_rank<&inside::kernels::serial::rank_neighbors>)->Name("rank_neighbors/serial")->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank<&inside::kernels::rank_neighbors>)->Name("rank_neighbors/omp")->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy<&inside::kernels::serial::energy_distance>)->Name("energy_distance/serial")->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy<&inside::kernels::energy_distance>)->Name("energy_distance/omp")->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest<&inside::kernels::serial::nearest_distance>)->Name("nearest_distance/serial")->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest<&inside::kernels::nearest_distance>)->Name("nearest_distance/omp")->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
