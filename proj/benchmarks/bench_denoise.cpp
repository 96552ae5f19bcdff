#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "itfmap/denoise.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

void BM_Filter(benchmark::State& state, const char* spec_text) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const auto spec = itfmap::denoise::parse_filter(spec_text);
  for (auto _ : state) benchmark::DoNotOptimize(itfmap::denoise::apply(spec, x, 4e-9));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Filter, bpf, "bpf")->Arg(1 << 15);
BENCHMARK_CAPTURE(BM_Filter, kf, "kf")->Arg(1 << 15);
BENCHMARK_CAPTURE(BM_Filter, wt_sym4_sure, "wt-sym4-sure")->Arg(1 << 15);
BENCHMARK_CAPTURE(BM_Filter, wt_coif5_universal, "wt-coif5-universal")->Arg(1 << 15);

}  // namespace
