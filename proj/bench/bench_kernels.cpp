#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sarkit/kernels.hpp"

using namespace sarkit;

namespace {

std::vector<float> random_floats(std::size_t n, unsigned seed, float lo = -1.0f, float hi = 1.0f) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<double> random_doubles(std::size_t n, unsigned seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <auto Conv>
void BM_Conv3x3(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int ch = static_cast<int>(state.range(1));
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  const auto in = random_floats(plane * ch, 1);
  const auto w = random_floats(static_cast<std::size_t>(ch) * ch * 9, 2);
  const auto b = random_floats(ch, 3);
  std::vector<float> out(plane * ch);
  for (auto _ : state) {
    Conv(kernels::Conv3x3Args{in, w, b, out, ch, ch, n, n, true});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * plane * ch * ch * 9);
}

template <auto Step>
void BM_TvStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const std::size_t sz = static_cast<std::size_t>(n) * n;
  const auto y = random_doubles(sz, 4, -2.0, 2.0);
  std::vector<double> px(sz, 0.0), py(sz, 0.0), scratch(sz);
  for (auto _ : state) {
    Step(y, px, py, scratch, n, n, 0.2, 0.248);
    benchmark::DoNotOptimize(px.data());
  }
  state.SetItemsProcessed(state.iterations() * sz);
}

template <auto Sweep>
void BM_ProxSweep(benchmark::State& state) {
  const std::size_t sz = static_cast<std::size_t>(state.range(0)) * state.range(0);
  const auto v = random_doubles(sz, 5, -5.0, 5.0);
  const auto y = random_doubles(sz, 6, -5.0, 5.0);
  std::vector<double> out(sz);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Sweep(v, y, 1.0, 2.0, out));
  }
  state.SetItemsProcessed(state.iterations() * sz);
}

template <auto Box>
void BM_BoxMean(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto in = random_floats(static_cast<std::size_t>(n) * n, 7, 0.0f, 10.0f);
  std::vector<float> out(in.size());
  for (auto _ : state) {
    Box(in, n, n, 10, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * in.size());
}

}  // namespace

BENCHMARK(BM_Conv3x3<kernels::serial::conv3x3>)->Name("conv3x3/serial")->Args({128, 16})->Args({256, 64});
BENCHMARK(BM_Conv3x3<kernels::parallel::conv3x3>)->Name("conv3x3/parallel")->Args({128, 16})->Args({256, 64});
BENCHMARK(BM_TvStep<kernels::serial::tv_dual_step>)->Name("tv_dual_step/serial")->Arg(512);
BENCHMARK(BM_TvStep<kernels::parallel::tv_dual_step>)->Name("tv_dual_step/parallel")->Arg(512);
BENCHMARK(BM_ProxSweep<kernels::serial::prox_data_sweep>)->Name("prox_sweep/serial")->Arg(512);
BENCHMARK(BM_ProxSweep<kernels::parallel::prox_data_sweep>)->Name("prox_sweep/parallel")->Arg(512);
BENCHMARK(BM_BoxMean<kernels::serial::box_mean>)->Name("box_mean21/serial")->Arg(512);
BENCHMARK(BM_BoxMean<kernels::parallel::box_mean>)->Name("box_mean21/parallel")->Arg(512);

BENCHMARK_MAIN();
