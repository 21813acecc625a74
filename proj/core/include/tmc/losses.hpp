#pragma once

#include <vector>

#include <Eigen/Core>

#include "tmc/opinion.hpp"

namespace tmc {

/// Ground-truth label as a one-hot row: class_index in [0, class_count).
struct LabelOneHot {
  int class_index = 0;
  int class_count = 2;

  LabelOneHot(int index, int count);
  Eigen::VectorXd as_vector() const;
};

/// KL annealing weight: lambda_t = min(1, epoch / annealing_epochs).
/// Starts at 0, grows linearly, saturates at 1 from epoch annealing_epochs on.
struct AnnealSchedule {
  int annealing_epochs = 50;

  explicit AnnealSchedule(int epochs);
  double lambda_at(int epoch) const;
};

/// Expected cross-entropy under Dir(alpha): psi(S) - psi(alpha_gt). Always >= 0.
double ace_loss(const DirichletParams& alpha, const LabelOneHot& y);

/// alpha with the ground-truth slot reset to 1; other slots unchanged.
/// Keeps the KL term from penalizing ground-truth evidence.
DirichletParams adjusted_alpha(const DirichletParams& alpha, const LabelOneHot& y);

/// KL( Dir(alpha_tilde) || Dir(1,...,1) ), computed in log-gamma space.
double kl_to_uniform(const DirichletParams& alpha_tilde);

/// ace_loss + lambda_t * kl_to_uniform(adjusted_alpha). Requires lambda_t in [0, 1].
double sample_loss(const DirichletParams& alpha, const LabelOneHot& y, double lambda_t);

/// Multi-task objective for one sample: the joint term plus one term per view.
double overall_loss(const DirichletParams& joint_alpha,
                    const std::vector<DirichletParams>& view_alphas, const LabelOneHot& y,
                    double lambda_t);

/// Analytic gradient of sample_loss with respect to alpha. The KL part flows
/// only through the non-ground-truth slots (the adjusted ground-truth slot is
/// a constant 1 by construction).
Eigen::VectorXd grad_sample_loss(const DirichletParams& alpha, const LabelOneHot& y,
                                 double lambda_t);

}  // namespace tmc
