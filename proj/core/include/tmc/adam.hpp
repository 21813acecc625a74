#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tmc/network.hpp"

namespace tmc {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-4;  // L2 coefficient, added to gradients before the update
};

/// Standard Adam with bias correction. Moment buffers are allocated on the
/// first step and must match parameter shapes from then on.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig config) : config_(config) {}

  void step(const std::vector<TensorRef>& params, const std::vector<TensorRef>& grads);

  std::int64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::int64_t step_count_ = 0;
  std::vector<Eigen::VectorXd> first_moment_;
  std::vector<Eigen::VectorXd> second_moment_;
};

}  // namespace tmc
