// Serial against OpenMP kernels. Run with --benchmark_filter to pick a family.
#include <benchmark/benchmark.h>

#include <vector>

#include "lrv/convolution.hpp"
#include "lrv/fixedb.hpp"
#include "lrv/lagwindow.hpp"
#include "lrv/rng.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  lrv::RngStream rng(7, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

void BM_AcvSerial(benchmark::State& st) {
  const auto x = noise(static_cast<std::size_t>(st.range(0)));
  const auto lags = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(lrv::kernels::autocovariances_serial(x, lags));
}

void BM_AcvParallel(benchmark::State& st) {
  const auto x = noise(static_cast<std::size_t>(st.range(0)));
  const auto lags = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(lrv::kernels::autocovariances_parallel(x, lags));
}

void BM_AcvFft(benchmark::State& st) {
  const auto x = noise(static_cast<std::size_t>(st.range(0)));
  const auto lags = static_cast<std::size_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(lrv::kernels::autocovariances_fft(x, lags));
}

void acv_args(benchmark::internal::Benchmark* b) {
  b->Args({20000, 141})->Args({20000, 2000})->Args({100000, 1000})->Unit(benchmark::kMicrosecond);
}

BENCHMARK(BM_AcvSerial)->Apply(acv_args);
BENCHMARK(BM_AcvParallel)->Apply(acv_args);
BENCHMARK(BM_AcvFft)->Apply(acv_args);

void BM_ConvDirect(benchmark::State& st) {
  const auto x = noise(2000);
  const lrv::Window w(lrv::WindowKind::Parzen, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(lrv::causal_window_convolution_direct(x, w, 2000.0));
}

void BM_ConvMoments(benchmark::State& st) {
  const auto x = noise(2000);
  const lrv::Window w(lrv::WindowKind::Parzen, 0.5);
  for (auto _ : st) benchmark::DoNotOptimize(lrv::causal_window_convolution(x, w, 2000.0));
}

BENCHMARK(BM_ConvDirect)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ConvMoments)->Unit(benchmark::kMicrosecond);

const lrv::Window kKbWindow(lrv::WindowKind::Bartlett, 0.5);
const lrv::KbConfig kKbConfig{2000, 4000, 11};

void BM_KbSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lrv::simulate_kb_samples_serial(kKbWindow, kKbConfig));
}

void BM_KbParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(lrv::simulate_kb_samples(kKbWindow, kKbConfig));
}

BENCHMARK(BM_KbSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KbParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
