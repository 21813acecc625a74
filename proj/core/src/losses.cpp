#include "tmc/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tmc/special_functions.hpp"

namespace tmc {

namespace {

void check_lambda(double lambda_t) {
  if (!(lambda_t >= 0.0 && lambda_t <= 1.0)) {
    throw std::invalid_argument("lambda_t must lie in [0, 1], got " + std::to_string(lambda_t));
  }
}

void check_matching(const DirichletParams& alpha, const LabelOneHot& y, const char* fn) {
  if (alpha.class_count() != y.class_count) {
    throw std::invalid_argument(std::string(fn) + ": class counts differ");
  }
}

}  // namespace

LabelOneHot::LabelOneHot(int index, int count) : class_index(index), class_count(count) {
  if (count < 2) {
    throw std::invalid_argument("LabelOneHot: need at least two classes");
  }
  if (index < 0 || index >= count) {
    throw std::invalid_argument("LabelOneHot: class index " + std::to_string(index) +
                                " outside [0, " + std::to_string(count) + ")");
  }
}

Eigen::VectorXd LabelOneHot::as_vector() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(class_count);
  v[class_index] = 1.0;
  return v;
}

AnnealSchedule::AnnealSchedule(int epochs) : annealing_epochs(epochs) {
  if (epochs < 1) {
    throw std::invalid_argument("AnnealSchedule: annealing_epochs must be >= 1");
  }
}

double AnnealSchedule::lambda_at(int epoch) const {
  if (epoch < 0) {
    throw std::invalid_argument("AnnealSchedule: negative epoch");
  }
  return std::min(1.0, static_cast<double>(epoch) / annealing_epochs);
}

double ace_loss(const DirichletParams& alpha, const LabelOneHot& y) {
  check_matching(alpha, y, "ace_loss");
  return digamma(alpha.strength()) - digamma(alpha.alpha()[y.class_index]);
}

DirichletParams adjusted_alpha(const DirichletParams& alpha, const LabelOneHot& y) {
  check_matching(alpha, y, "adjusted_alpha");
  Eigen::VectorXd adjusted = alpha.alpha();
  adjusted[y.class_index] = 1.0;
  return DirichletParams(std::move(adjusted));
}

double kl_to_uniform(const DirichletParams& alpha_tilde) {
  const Eigen::VectorXd& a = alpha_tilde.alpha();
  const double total = a.sum();
  const int k = alpha_tilde.class_count();
  double value = ln_gamma(total) - ln_gamma(static_cast<double>(k));
  const double psi_total = digamma(total);
  for (int i = 0; i < k; ++i) {
    value -= ln_gamma(a[i]);
    value += (a[i] - 1.0) * (digamma(a[i]) - psi_total);
  }
  return value;
}

double sample_loss(const DirichletParams& alpha, const LabelOneHot& y, double lambda_t) {
  check_lambda(lambda_t);
  double loss = ace_loss(alpha, y);
  if (lambda_t > 0.0) {
    loss += lambda_t * kl_to_uniform(adjusted_alpha(alpha, y));
  }
  return loss;
}

double overall_loss(const DirichletParams& joint_alpha,
                    const std::vector<DirichletParams>& view_alphas, const LabelOneHot& y,
                    double lambda_t) {
  double loss = sample_loss(joint_alpha, y, lambda_t);
  for (const DirichletParams& view : view_alphas) {
    if (view.class_count() != joint_alpha.class_count()) {
      throw std::invalid_argument("overall_loss: class counts differ across views");
    }
    loss += sample_loss(view, y, lambda_t);
  }
  return loss;
}

Eigen::VectorXd grad_sample_loss(const DirichletParams& alpha, const LabelOneHot& y,
                                 double lambda_t) {
  check_lambda(lambda_t);
  check_matching(alpha, y, "grad_sample_loss");
  const int k = alpha.class_count();
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(k, trigamma(alpha.strength()));
  grad[y.class_index] -= trigamma(alpha.alpha()[y.class_index]);
  if (lambda_t > 0.0) {
    // d KL / d alpha_tilde_m = (alpha_tilde_m - 1) psi'(alpha_tilde_m)
    //                          - (S_tilde - K) psi'(S_tilde);
    // the ground-truth slot of alpha_tilde is constant, so no flow there.
    const DirichletParams tilde = adjusted_alpha(alpha, y);
    const double tilde_total = tilde.strength();
    const double common = (tilde_total - k) * trigamma(tilde_total);
    for (int m = 0; m < k; ++m) {
      if (m == y.class_index) continue;
      const double am = tilde.alpha()[m];
      grad[m] += lambda_t * ((am - 1.0) * trigamma(am) - common);
    }
  }
  return grad;
}

}  // namespace tmc
