#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "itfmap/xcorr.hpp"

namespace {

std::vector<double> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

void BM_CcTime(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = noise(n, 1), y = noise(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(itfmap::xcorr::cc_time(x, y));
}
BENCHMARK(BM_CcTime)->Arg(128)->Arg(256)->Arg(512);

void BM_CcFreq(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = noise(n, 1), y = noise(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(itfmap::xcorr::cc_freq(x, y));
}
BENCHMARK(BM_CcFreq)->Arg(128)->Arg(256)->Arg(512);

void BM_CcWavelet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = noise(n, 1), y = noise(n, 2);
  const auto basis = itfmap::WaveletBasis::from_name("sym4");
  for (auto _ : state) benchmark::DoNotOptimize(itfmap::xcorr::cc_wavelet(x, y, basis));
}
BENCHMARK(BM_CcWavelet)->Arg(256);

void BM_RefinePeak(benchmark::State& state) {
  const auto x = noise(256, 3), y = noise(256, 4);
  const auto c = itfmap::xcorr::cc_time(x, y);
  const itfmap::xcorr::InterpSpec spec{static_cast<itfmap::xcorr::InterpMethod>(state.range(0)), 8};
  for (auto _ : state) benchmark::DoNotOptimize(itfmap::xcorr::refine_peak(c, spec));
}
BENCHMARK(BM_RefinePeak)->Arg(1)->Arg(2);

}  // namespace
