#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "dkg/dkg_system.hpp"
#include "dkg/kernels.hpp"
#include "dkg/rng.hpp"

namespace {

using dkg::kernels::cplx;

struct Buffers {
  std::vector<cplx> a, b, out;
  std::vector<double> w;
  explicit Buffers(std::size_t n) : a(n), b(n), out(n), w(n) {
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = {dkg::rng::uniform01(1, 0, i), dkg::rng::uniform01(1, 1, i)};
      b[i] = {dkg::rng::uniform01(1, 2, i), dkg::rng::uniform01(1, 3, i)};
      w[i] = 1.0 + dkg::rng::uniform01(1, 4, i);
    }
  }
};

template <bool Parallel>
void BM_Multiply(benchmark::State& state) {
  Buffers buf(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      dkg::kernels::omp::multiply(buf.a, buf.b, buf.out);
    else
      dkg::kernels::serial::multiply(buf.a, buf.b, buf.out);
    benchmark::DoNotOptimize(buf.out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_WeightedEnergy(benchmark::State& state) {
  Buffers buf(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double e = Parallel ? dkg::kernels::omp::weighted_energy(buf.a, buf.w)
                        : dkg::kernels::serial::weighted_energy(buf.a, buf.w);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_KgRotate(benchmark::State& state) {
  Buffers buf(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      dkg::kernels::omp::kg_rotate(buf.a, buf.b, buf.w, 1e-3);
    else
      dkg::kernels::serial::kg_rotate(buf.a, buf.b, buf.w, 1e-3);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Step(benchmark::State& state) {
  auto grid = dkg::make_grid(static_cast<std::size_t>(state.range(0)), 50.0);
  auto s = dkg::make_rough_state(grid, -0.1, 0.28, 3, 1.0);
  const dkg::PhysicsParams p{1.0, 1.0};
  for (auto _ : state) {
    s = dkg::step(s, 1e-4, p);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_Multiply<false>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Multiply<true>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_WeightedEnergy<false>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_WeightedEnergy<true>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_KgRotate<false>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_KgRotate<true>)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(256, 1 << 14);

BENCHMARK_MAIN();
