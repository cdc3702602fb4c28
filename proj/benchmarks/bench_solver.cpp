#include <benchmark/benchmark.h>

#include "mfgcanon/mfgcanon.hpp"

namespace {

using namespace mfgcanon;

MFGProblem regularized_problem(std::size_t agents) {
  InstanceSampler rng(4);
  return MFGProblem(make_h_pxc(make_h_mf(1, 1.0, 0.0), 3.0), make_g_anti(1, 2.0), rng.matrix(1, agents), 0.5,
                    200);
}

void BM_Shooting(benchmark::State& state) {
  const auto problem = regularized_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_mfg_shooting(problem));
}
BENCHMARK(BM_Shooting)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Picard(benchmark::State& state) {
  const auto problem = regularized_problem(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_mfg_picard(problem));
}
BENCHMARK(BM_Picard)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Integrate(benchmark::State& state) {
  const auto h = make_h_mf(2, 0.5, 1.0);
  InstanceSampler rng(5);
  const Matrix x0 = rng.matrix(2, 8), p0 = rng.matrix(2, 8);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_characteristics(*h, x0, p0, 1.0, steps));
}
BENCHMARK(BM_Integrate)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace
