#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "tmc/errors.hpp"

namespace tmc {

/// A subjective-logic opinion over K classes: K non-negative belief masses
/// plus one uncertainty mass, summing to one. Immutable value type.
class Opinion {
 public:
  /// Validates b_k >= 0, u >= 0, K >= 2, and u + sum b_k = 1 within 1e-9.
  Opinion(Eigen::VectorXd beliefs, double uncertainty);

  /// The total-ignorance opinion: b = 0, u = 1. Identity of the combination rule.
  static Opinion vacuous(int class_count);

  const Eigen::VectorXd& beliefs() const { return beliefs_; }
  double uncertainty() const { return uncertainty_; }
  int class_count() const { return static_cast<int>(beliefs_.size()); }

 private:
  Eigen::VectorXd beliefs_;
  double uncertainty_;
};

/// Dirichlet concentration parameters. Every component positive and finite;
/// components are >= 1 whenever the parameters come from non-negative evidence.
class DirichletParams {
 public:
  explicit DirichletParams(Eigen::VectorXd alpha);

  const Eigen::VectorXd& alpha() const { return alpha_; }
  double strength() const { return alpha_.sum(); }
  int class_count() const { return static_cast<int>(alpha_.size()); }

 private:
  Eigen::VectorXd alpha_;
};

/// A combined opinion together with the conflict C of the last pairwise step.
struct JointMass {
  Opinion opinion;
  double conflict = 0.0;  // in [0, 1)
};

/// Maps non-negative evidence e to (opinion, Dirichlet params):
/// alpha = e + 1, S = sum alpha, b_k = e_k / S, u = K / S.
std::pair<Opinion, DirichletParams> opinion_from_evidence(
    const Eigen::Ref<const Eigen::VectorXd>& evidence);

/// Inverse map: S = K / u, e_k = b_k * S, alpha = e + 1. Requires u in (0, 1].
DirichletParams dirichlet_from_opinion(const Opinion& op);

/// Dempster's combination rule for two opinions over the same frame:
///   C   = sum_{i != j} b1_i b2_j
///   b_k = (b1_k b2_k + b1_k u2 + b2_k u1) / (1 - C)
///   u   = u1 u2 / (1 - C)
/// Throws conflict_error when 1 - C < 1e-12.
JointMass combine_pair(const Opinion& m1, const Opinion& m2);

/// Left fold of combine_pair over the views, in the given order.
/// A single opinion is returned unchanged.
JointMass combine_many(const std::vector<Opinion>& opinions);

/// Mean of the Dirichlet distribution: p_k = alpha_k / S.
Eigen::VectorXd expected_probabilities(const DirichletParams& d);

/// Log density of Dir(p | alpha) at an interior point of the simplex
/// (all p_k > 0, sum p = 1 within 1e-9).
double dirichlet_log_pdf(const DirichletParams& d, const Eigen::Ref<const Eigen::VectorXd>& p);

// JSON wire format: {"beliefs":[...],"uncertainty":x} and {"alpha":[...]}.
void to_json(nlohmann::json& j, const Opinion& op);
void to_json(nlohmann::json& j, const DirichletParams& d);
Opinion opinion_from_json(const nlohmann::json& j);
DirichletParams dirichlet_from_json(const nlohmann::json& j);

}  // namespace tmc
