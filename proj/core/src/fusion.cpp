#include "tmc/fusion.hpp"

#include <stdexcept>

namespace tmc {

namespace {

// Adjoint of combine_pair. Inputs are the two operands, the normalized
// result and its conflict; (grad_b, grad_u) is the upstream gradient on the
// result. Writes the gradients on each operand's beliefs and uncertainty.
void combine_pair_backward(const Opinion& m1, const Opinion& m2, const Opinion& joint,
                           double conflict, const Eigen::VectorXd& grad_b, double grad_u,
                           Eigen::VectorXd& grad_b1, double& grad_u1, Eigen::VectorXd& grad_b2,
                           double& grad_u2) {
  const Eigen::VectorXd& b1 = m1.beliefs();
  const Eigen::VectorXd& b2 = m2.beliefs();
  const double u1 = m1.uncertainty();
  const double u2 = m2.uncertainty();
  const double normalizer = 1.0 - conflict;
  const double sum1 = b1.sum();
  const double sum2 = b2.sum();
  // Conflict feeds every output through the 1/(1 - C) factor; its adjoint is
  // the inner product of the upstream gradient with the normalized outputs.
  const double g_common = grad_b.dot(joint.beliefs()) + grad_u * joint.uncertainty();

  grad_b1 =
      ((grad_b.array() * (b2.array() + u2) + (sum2 - b2.array()) * g_common) / normalizer)
          .matrix();
  grad_u1 = (grad_b.dot(b2) + grad_u * u2) / normalizer;
  grad_b2 =
      ((grad_b.array() * (b1.array() + u1) + (sum1 - b1.array()) * g_common) / normalizer)
          .matrix();
  grad_u2 = (grad_b.dot(b1) + grad_u * u1) / normalizer;
}

// Adjoint of alpha -> opinion (b = (alpha - 1)/S, u = K/S).
Eigen::VectorXd opinion_from_alpha_backward(const Opinion& op, double strength,
                                            const Eigen::VectorXd& grad_b, double grad_u) {
  const double mixed = grad_b.dot(op.beliefs()) + grad_u * op.uncertainty();
  return ((grad_b.array() - mixed) / strength).matrix();
}

}  // namespace

std::pair<DirichletParams, FusionTape> fuse_forward(
    const std::vector<Eigen::VectorXd>& view_evidences) {
  if (view_evidences.empty()) {
    throw std::invalid_argument("fuse_forward: no views");
  }
  FusionTape tape;
  for (const Eigen::VectorXd& evidence : view_evidences) {
    auto [opinion, params] = opinion_from_evidence(evidence);
    tape.view_alphas.push_back(params.alpha());
    tape.view_opinions.push_back(std::move(opinion));
  }
  tape.prefix.push_back(tape.view_opinions.front());
  for (std::size_t v = 1; v < tape.view_opinions.size(); ++v) {
    JointMass step = combine_pair(tape.prefix.back(), tape.view_opinions[v]);
    tape.prefix.push_back(std::move(step.opinion));
    tape.prefix_conflicts.push_back(step.conflict);
  }
  DirichletParams joint = dirichlet_from_opinion(tape.prefix.back());
  tape.joint_alpha = joint.alpha();
  return {std::move(joint), std::move(tape)};
}

std::vector<Eigen::VectorXd> fuse_backward(
    const FusionTape& tape, const Eigen::Ref<const Eigen::VectorXd>& grad_joint_alpha) {
  const std::size_t views = tape.view_opinions.size();
  if (views == 0 || tape.prefix.size() != views) {
    throw std::invalid_argument("fuse_backward: invalid tape");
  }
  const Opinion& joint = tape.prefix.back();
  const int k = joint.class_count();
  if (grad_joint_alpha.size() != k) {
    throw std::invalid_argument("fuse_backward: gradient dimension mismatch");
  }

  // Joint alpha_k = b_k * K / u + 1.
  const double joint_u = joint.uncertainty();
  Eigen::VectorXd grad_b = grad_joint_alpha * (k / joint_u);
  double grad_u = -(k / (joint_u * joint_u)) * grad_joint_alpha.dot(joint.beliefs());

  // Unwind the fold.
  std::vector<Eigen::VectorXd> grad_view_b(views);
  std::vector<double> grad_view_u(views);
  for (std::size_t v = views; v-- > 1;) {
    Eigen::VectorXd grad_prev_b, grad_this_b;
    double grad_prev_u = 0.0, grad_this_u = 0.0;
    combine_pair_backward(tape.prefix[v - 1], tape.view_opinions[v], tape.prefix[v],
                          tape.prefix_conflicts[v - 1], grad_b, grad_u, grad_prev_b, grad_prev_u,
                          grad_this_b, grad_this_u);
    grad_view_b[v] = std::move(grad_this_b);
    grad_view_u[v] = grad_this_u;
    grad_b = std::move(grad_prev_b);
    grad_u = grad_prev_u;
  }
  grad_view_b[0] = std::move(grad_b);
  grad_view_u[0] = grad_u;

  std::vector<Eigen::VectorXd> grad_alphas(views);
  for (std::size_t v = 0; v < views; ++v) {
    const double strength = tape.view_alphas[v].sum();
    grad_alphas[v] = opinion_from_alpha_backward(tape.view_opinions[v], strength, grad_view_b[v],
                                                 grad_view_u[v]);
  }
  return grad_alphas;
}

}  // namespace tmc
