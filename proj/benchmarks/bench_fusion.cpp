#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tmc/fusion.hpp"

namespace {

std::vector<Eigen::VectorXd> random_evidences(int views, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 20.0);
  std::vector<Eigen::VectorXd> evidences;
  for (int v = 0; v < views; ++v) {
    Eigen::VectorXd e(classes);
    for (int k = 0; k < classes; ++k) e[k] = dist(rng);
    evidences.push_back(std::move(e));
  }
  return evidences;
}

void BM_FuseForward(benchmark::State& state) {
  const auto evidences = random_evidences(static_cast<int>(state.range(0)), 10, 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::fuse_forward(evidences));
  }
}
BENCHMARK(BM_FuseForward)->Arg(2)->Arg(4)->Arg(6);

void BM_FuseBackward(benchmark::State& state) {
  const auto evidences = random_evidences(static_cast<int>(state.range(0)), 10, 99);
  const auto [joint, tape] = tmc::fuse_forward(evidences);
  const Eigen::VectorXd grad = Eigen::VectorXd::Ones(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tmc::fuse_backward(tape, grad));
  }
}
BENCHMARK(BM_FuseBackward)->Arg(2)->Arg(4)->Arg(6);

}  // namespace
