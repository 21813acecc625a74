#include "tmc/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace tmc {

void AdamOptimizer::step(const std::vector<TensorRef>& params,
                         const std::vector<TensorRef>& grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("AdamOptimizer: parameter/gradient tensor counts differ");
  }
  if (first_moment_.empty()) {
    for (const TensorRef& p : params) {
      first_moment_.push_back(Eigen::VectorXd::Zero(p.size));
      second_moment_.push_back(Eigen::VectorXd::Zero(p.size));
    }
  }
  if (params.size() != first_moment_.size()) {
    throw std::invalid_argument("AdamOptimizer: tensor count changed between steps");
  }

  ++step_count_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));

  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size != grads[i].size || params[i].size != first_moment_[i].size()) {
      throw std::invalid_argument("AdamOptimizer: tensor shape mismatch");
    }
    Eigen::Map<Eigen::VectorXd> p(params[i].data, params[i].size);
    Eigen::Map<const Eigen::VectorXd> g(grads[i].data, grads[i].size);
    Eigen::VectorXd& m = first_moment_[i];
    Eigen::VectorXd& v = second_moment_[i];

    const Eigen::VectorXd g_reg = g + config_.weight_decay * p;
    m = config_.beta1 * m + (1.0 - config_.beta1) * g_reg;
    v = config_.beta2 * v + (1.0 - config_.beta2) * g_reg.cwiseProduct(g_reg);
    p.array() -= config_.learning_rate * (m.array() / bias1) /
                 ((v.array() / bias2).sqrt() + config_.epsilon);
  }
}

}  // namespace tmc
