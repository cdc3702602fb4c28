#include <benchmark/benchmark.h>

#include "mfgcanon/mfgcanon.hpp"

namespace {

using namespace mfgcanon;

HamiltonianPtr regularized(std::size_t d) { return make_h_pxc(make_h_mf(d, 1.0, 0.5), 2.0); }

void BM_DispFormH(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InstanceSampler rng(1);
  const auto h = regularized(2);
  const auto mu = rng.measure(n, 2);
  const Matrix p = rng.field(mu);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_disp_form_H(*h, mu, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DispFormH)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_AlphaDispCheck(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InstanceSampler rng(2);
  const auto h = regularized(2);
  const auto mu = rng.measure(n, 2);
  const Matrix p = rng.field(mu);
  for (auto _ : state) benchmark::DoNotOptimize(check_alpha_disp_H(h, mu, p, 1.5));
}
BENCHMARK(BM_AlphaDispCheck)->RangeMultiplier(2)->Range(4, 64);

void BM_AntiForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InstanceSampler rng(3);
  const auto g = make_g_quad(2, 1.0, -0.5, 0.3);
  const auto mu = rng.measure(n, 2);
  const LambdaParams l{2.0, 0.5, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(check_anti_monotone(*g, mu, l));
}
BENCHMARK(BM_AntiForm)->RangeMultiplier(2)->Range(4, 64);

}  // namespace
