#include <benchmark/benchmark.h>

#include "tmc/special_functions.hpp"

namespace {

void BM_Digamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::digamma(x));
  }
}
BENCHMARK(BM_Digamma)->Arg(5)->Arg(50)->Arg(5000);

void BM_Trigamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::trigamma(x));
  }
}
BENCHMARK(BM_Trigamma)->Arg(5)->Arg(50)->Arg(5000);

void BM_LnGamma(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::ln_gamma(x));
  }
}
BENCHMARK(BM_LnGamma)->Arg(5)->Arg(50)->Arg(5000);

}  // namespace
