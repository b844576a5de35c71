#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "frontier/discretization.hpp"
#include "frontier/evolution.hpp"
#include "frontier/kernels.hpp"

using namespace frontier;

namespace {

std::vector<double> random_field(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> w(n);
  for (double& x : w) x = U(rng);
  return w;
}

void BM_ConvolutionFFT(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ConvolutionEngine engine(Kernel::make(KernelParams{}), 0.25);
  const auto w = random_field(n);
  std::vector<double> out(n);
  const double h = 0.25 * static_cast<double>(n - 1) + 0.1;
  for (auto _ : state) {
    engine.apply(w, h, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolutionFFT)->RangeMultiplier(4)->Range(256, 1 << 18)->Complexity();

void BM_ConvolutionDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ConvolutionEngine engine(Kernel::make(KernelParams{}), 0.25);
  const auto w = random_field(n);
  std::vector<double> out(n);
  const double h = 0.25 * static_cast<double>(n - 1) + 0.1;
  for (auto _ : state) {
    engine.apply_direct(w, h, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolutionDirect)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_Step(benchmark::State& state) {
  ModelParams p;
  p.h0 = 0.25 * static_cast<double>(state.range(0));
  Stepper stepper(p, 0.25);
  const SimState init = initial_state(p, 0.25);
  const double dt = stable_dt(p, 0.5);
  for (auto _ : state) {
    state.PauseTiming();
    SimState s = init;
    state.ResumeTiming();
    stepper.step(s, dt);
    benchmark::DoNotOptimize(s.h);
  }
}
BENCHMARK(BM_Step)->RangeMultiplier(8)->Range(512, 1 << 18);

void BM_TailMass(benchmark::State& state) {
  KernelParams kp;
  kp.beta = 0.5;  // not closed form: exercises the table
  const Kernel k = Kernel::make(kp);
  double z = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.tail_mass(z));
    z = z < 1e7 ? z * 1.01 : 1.0;
  }
}
BENCHMARK(BM_TailMass);

}  // namespace

BENCHMARK_MAIN();
