#include <benchmark/benchmark.h>

#include "tmc/dataset.hpp"
#include "tmc/trainer.hpp"

namespace {

void BM_TrainEpoch(benchmark::State& state) {
  tmc::SynthSpec spec;
  spec.samples = static_cast<int>(state.range(0));
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);
  const tmc::SplitIndices split = tmc::stratified_split(ds, 0.2, 42);
  const tmc::MultiViewDataset normalized = tmc::Normalizer::fit(ds, split.train).transform(ds);

  tmc::TrainConfig config;
  config.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::train(normalized, split.train, config));
  }
}
BENCHMARK(BM_TrainEpoch)->Arg(150)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
