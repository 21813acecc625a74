#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tmc/opinion.hpp"

namespace tmc {

/// Everything cached by fuse_forward that the reverse pass needs: per-view
/// opinions, the running prefix of the combination fold, and the joint
/// parameters. Replaying the fold from the stored per-view opinions
/// reproduces joint_alpha within 1e-12.
struct FusionTape {
  std::vector<Eigen::VectorXd> view_alphas;
  std::vector<Opinion> view_opinions;
  std::vector<Opinion> prefix;           // prefix[i] = M^0 (+) ... (+) M^i
  std::vector<double> prefix_conflicts;  // conflict of fold step i (i >= 1)
  Eigen::VectorXd joint_alpha;
};

/// Evidence in, joint Dirichlet parameters out: per-view opinions via
/// alpha = e + 1, the combination fold, then joint evidence recovery.
std::pair<DirichletParams, FusionTape> fuse_forward(
    const std::vector<Eigen::VectorXd>& view_evidences);

/// Reverse-mode pass through fuse_forward: given d(loss)/d(joint alpha),
/// returns d(loss)/d(view alpha) for each view (equivalently, with respect to
/// the view evidence, since alpha = e + 1).
std::vector<Eigen::VectorXd> fuse_backward(const FusionTape& tape,
                                           const Eigen::Ref<const Eigen::VectorXd>& grad_joint_alpha);

}  // namespace tmc
