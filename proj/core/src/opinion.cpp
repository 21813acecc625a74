#include "tmc/opinion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tmc/special_functions.hpp"

namespace tmc {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kConflictGuard = 1e-12;

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw std::invalid_argument("expected a JSON array of numbers");
  }
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& item : j) {
    if (!item.is_number()) {
      throw std::invalid_argument("expected a JSON array of numbers");
    }
    v[i++] = item.get<double>();
  }
  return v;
}

}  // namespace

Opinion::Opinion(Eigen::VectorXd beliefs, double uncertainty)
    : beliefs_(std::move(beliefs)), uncertainty_(uncertainty) {
  if (beliefs_.size() < 2) {
    throw std::invalid_argument("Opinion: need at least two classes");
  }
  if (!beliefs_.allFinite() || !std::isfinite(uncertainty_)) {
    throw std::invalid_argument("Opinion: non-finite mass");
  }
  if (beliefs_.minCoeff() < 0.0 || uncertainty_ < 0.0) {
    throw std::invalid_argument("Opinion: negative mass");
  }
  const double total = beliefs_.sum() + uncertainty_;
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("Opinion: masses sum to " + std::to_string(total) +
                                ", expected 1");
  }
}

Opinion Opinion::vacuous(int class_count) {
  return Opinion(Eigen::VectorXd::Zero(class_count), 1.0);
}

std::pair<Opinion, DirichletParams> opinion_from_evidence(
    const Eigen::Ref<const Eigen::VectorXd>& evidence) {
  const Eigen::Index k = evidence.size();
  if (k < 2) {
    throw std::invalid_argument("opinion_from_evidence: need at least two classes");
  }
  if (!evidence.allFinite() || evidence.minCoeff() < 0.0) {
    throw std::invalid_argument("opinion_from_evidence: evidence must be finite and >= 0");
  }
  Eigen::VectorXd alpha = evidence.array() + 1.0;
  const double strength = alpha.sum();
  Eigen::VectorXd beliefs = evidence / strength;
  const double uncertainty = static_cast<double>(k) / strength;
  return {Opinion(std::move(beliefs), uncertainty), DirichletParams(std::move(alpha))};
}

DirichletParams::DirichletParams(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) {
    throw std::invalid_argument("DirichletParams: need at least two components");
  }
  if (!alpha_.allFinite() || alpha_.minCoeff() <= 0.0) {
    throw std::invalid_argument("DirichletParams: components must be finite and positive");
  }
}

DirichletParams dirichlet_from_opinion(const Opinion& op) {
  const double u = op.uncertainty();
  if (u <= 0.0 || u > 1.0 + kMassTolerance) {
    throw std::invalid_argument("dirichlet_from_opinion: uncertainty must lie in (0, 1], got " +
                                std::to_string(u));
  }
  const double strength = op.class_count() / u;
  return DirichletParams(op.beliefs() * strength + Eigen::VectorXd::Ones(op.class_count()));
}

JointMass combine_pair(const Opinion& m1, const Opinion& m2) {
  if (m1.class_count() != m2.class_count()) {
    throw std::invalid_argument("combine_pair: class counts differ");
  }
  const Eigen::VectorXd& b1 = m1.beliefs();
  const Eigen::VectorXd& b2 = m2.beliefs();
  // C = sum_{i != j} b1_i b2_j, arranged so the computation is symmetric in
  // the arguments and commutativity holds bit-for-bit.
  const double conflict = b1.sum() * b2.sum() - b1.dot(b2);
  const double normalizer = 1.0 - conflict;
  if (normalizer < kConflictGuard) {
    throw conflict_error("combine_pair: total conflict (C = " + std::to_string(conflict) + ")");
  }
  Eigen::VectorXd beliefs =
      ((b1.array() * b2.array() +
        (b1.array() * m2.uncertainty() + b2.array() * m1.uncertainty())) /
       normalizer)
          .matrix();
  const double uncertainty = m1.uncertainty() * m2.uncertainty() / normalizer;
  return JointMass{Opinion(std::move(beliefs), uncertainty), conflict};
}

JointMass combine_many(const std::vector<Opinion>& opinions) {
  if (opinions.empty()) {
    throw std::invalid_argument("combine_many: empty opinion list");
  }
  JointMass joint{opinions.front(), 0.0};
  for (std::size_t v = 1; v < opinions.size(); ++v) {
    joint = combine_pair(joint.opinion, opinions[v]);
  }
  return joint;
}

Eigen::VectorXd expected_probabilities(const DirichletParams& d) {
  return d.alpha() / d.strength();
}

double dirichlet_log_pdf(const DirichletParams& d, const Eigen::Ref<const Eigen::VectorXd>& p) {
  if (p.size() != d.alpha().size()) {
    throw std::invalid_argument("dirichlet_log_pdf: dimension mismatch");
  }
  if (!p.allFinite() || p.minCoeff() <= 0.0 || std::abs(p.sum() - 1.0) > kMassTolerance) {
    throw std::domain_error("dirichlet_log_pdf: point must lie in the open simplex interior");
  }
  return ((d.alpha().array() - 1.0) * p.array().log()).sum() - ln_multinomial_beta(d.alpha());
}

void to_json(nlohmann::json& j, const Opinion& op) {
  j = nlohmann::json{{"beliefs", std::vector<double>(op.beliefs().begin(), op.beliefs().end())},
                     {"uncertainty", op.uncertainty()}};
}

void to_json(nlohmann::json& j, const DirichletParams& d) {
  j = nlohmann::json{{"alpha", std::vector<double>(d.alpha().begin(), d.alpha().end())}};
}

Opinion opinion_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("beliefs") || !j.contains("uncertainty")) {
    throw std::invalid_argument("opinion JSON must have \"beliefs\" and \"uncertainty\"");
  }
  return Opinion(vector_from_json(j.at("beliefs")), j.at("uncertainty").get<double>());
}

DirichletParams dirichlet_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("alpha")) {
    throw std::invalid_argument("dirichlet JSON must have \"alpha\"");
  }
  return DirichletParams(vector_from_json(j.at("alpha")));
}

}  // namespace tmc
