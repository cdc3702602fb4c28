#include <benchmark/benchmark.h>

#include "mfgcanon/mfgcanon.hpp"

namespace {

using namespace mfgcanon;

void BM_FdJet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InstanceSampler rng(6);
  const auto h = transform_hamiltonian(make_h_mf(2, 0.7, -1.3), 0.5);
  const auto mu = rng.measure(n, 2);
  const Vector x = rng.vector(2), p = rng.vector(2);
  for (auto _ : state) benchmark::DoNotOptimize(fd_derivatives(*h, x, mu, p, 1e-4));
}
BENCHMARK(BM_FdJet)->Arg(2)->Arg(8)->Arg(32);

void BM_AnalyticJet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InstanceSampler rng(6);
  const auto h = transform_hamiltonian(make_h_mf(2, 0.7, -1.3), 0.5);
  const auto mu = rng.measure(n, 2);
  const Vector x = rng.vector(2), p = rng.vector(2);
  for (auto _ : state) benchmark::DoNotOptimize(h->jet(x, mu, p));
}
BENCHMARK(BM_AnalyticJet)->Arg(2)->Arg(8)->Arg(32);

void BM_EstimateBounds(benchmark::State& state) {
  const auto h = make_h_pxc(make_h_mf(2, 1.0, 0.5), 2.0);
  for (auto _ : state) {
    InstanceSampler rng(7);
    benchmark::DoNotOptimize(estimate_bounds(*h, point_sampler(rng, 4, 2), 100));
  }
}
BENCHMARK(BM_EstimateBounds);

}  // namespace
