#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tmc/losses.hpp"
#include "tmc/special_functions.hpp"

using tmc::AnnealSchedule;
using tmc::DirichletParams;
using tmc::LabelOneHot;
using tmc::oracle::close_rel;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("ace_loss frozen examples") {
  CHECK(tmc::ace_loss(DirichletParams(vec({1, 1})), LabelOneHot(0, 2)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // psi(45) - psi(41) = 1/41 + 1/42 + 1/43 + 1/44, high-precision value.
  CHECK(tmc::ace_loss(DirichletParams(vec({41, 2, 2})), LabelOneHot(0, 3)) ==
        doctest::Approx(0.0941828543927239).epsilon(1e-12));
}

TEST_CASE("ace_loss equals the quadrature of its integral form for K = 2") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(1.0, 15.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector2d alpha(dist(rng), dist(rng));
    const int gt = static_cast<int>(rng() % 2);
    const double closed = tmc::ace_loss(DirichletParams(alpha), LabelOneHot(gt, 2));
    const double integral = tmc::oracle::ace_integral_k2(alpha, gt);
    CHECK(std::abs(closed - integral) < 1e-6);
  }
}

TEST_CASE("ace_loss is non-negative and decreases in ground-truth evidence") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> dist(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Eigen::VectorXd evidence(k);
    for (int i = 0; i < k; ++i) evidence[i] = dist(rng);
    const int gt = static_cast<int>(rng() % k);
    const LabelOneHot y(gt, k);
    const DirichletParams base((evidence.array() + 1.0).matrix());
    CHECK(tmc::ace_loss(base, y) >= 0.0);
    Eigen::VectorXd more = evidence;
    more[gt] += 0.5 + dist(rng) / 10.0;
    const DirichletParams richer((more.array() + 1.0).matrix());
    CHECK(tmc::ace_loss(richer, y) < tmc::ace_loss(base, y));
  }
}

TEST_CASE("adjusted_alpha replaces only the ground-truth slot") {
  const DirichletParams adjusted =
      tmc::adjusted_alpha(DirichletParams(vec({5, 3, 2})), LabelOneHot(0, 3));
  CHECK(adjusted.alpha().isApprox(vec({1, 3, 2})));

  const DirichletParams uniform(vec({1, 1, 1, 1}));
  for (int gt = 0; gt < 4; ++gt) {
    CHECK(tmc::adjusted_alpha(uniform, LabelOneHot(gt, 4)).alpha().isApprox(uniform.alpha()));
  }

  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> dist(0.5, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd alpha(3);
    for (int i = 0; i < 3; ++i) alpha[i] = dist(rng);
    const int gt = static_cast<int>(rng() % 3);
    const DirichletParams tilde = tmc::adjusted_alpha(DirichletParams(alpha), LabelOneHot(gt, 3));
    CHECK(tilde.alpha()[gt] == 1.0);
    for (int i = 0; i < 3; ++i) {
      if (i != gt) CHECK(tilde.alpha()[i] == alpha[i]);
    }
  }
}

TEST_CASE("kl_to_uniform is zero exactly at the uniform parameters") {
  CHECK(tmc::kl_to_uniform(DirichletParams(vec({1, 1, 1}))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(tmc::kl_to_uniform(DirichletParams(Eigen::VectorXd::Ones(7)))) < 1e-12);
}

TEST_CASE("kl_to_uniform matches its Monte-Carlo estimate") {
  // Smoke version of the acceptance check: a few alphas, 2e5 draws.
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> dist(0.3, 20.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    Eigen::VectorXd alpha(k);
    for (int i = 0; i < k; ++i) alpha[i] = dist(rng);
    const double closed = tmc::kl_to_uniform(DirichletParams(alpha));
    const auto mc = tmc::oracle::kl_to_uniform_monte_carlo(alpha, 200000, 555 + trial);
    CHECK(std::abs(closed - mc.mean) <= 3.5 * mc.standard_error);
  }
  // The frozen example from the adjusted-alpha pipeline.
  const double frozen = tmc::kl_to_uniform(DirichletParams(vec({1, 3, 2})));
  CHECK(frozen == doctest::Approx(0.5511973816621554).epsilon(1e-12));
}

TEST_CASE("kl_to_uniform is non-negative on random parameters") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> dist(0.1, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 5);
    Eigen::VectorXd alpha(k);
    for (int i = 0; i < k; ++i) alpha[i] = dist(rng);
    CHECK(tmc::kl_to_uniform(DirichletParams(alpha)) >= 0.0);
  }
}

TEST_CASE("kl_to_uniform is positive away from uniform") {
  std::mt19937_64 rng(127);
  std::uniform_real_distribution<double> dist(0.1, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd alpha(3);
    for (int i = 0; i < 3; ++i) alpha[i] = dist(rng);
    if ((alpha.array() - 1.0).abs().maxCoeff() < 1e-3) continue;
    CHECK(tmc::kl_to_uniform(DirichletParams(alpha)) > 0.0);
  }
}

TEST_CASE("sample_loss composition") {
  const DirichletParams alpha(vec({5, 3, 2}));
  const LabelOneHot y(0, 3);

  SUBCASE("lambda 0 reduces to ace_loss") {
    CHECK(tmc::sample_loss(alpha, y, 0.0) == tmc::ace_loss(alpha, y));
  }
  SUBCASE("uniform alpha keeps only the ace term") {
    const DirichletParams uniform(vec({1, 1, 1}));
    CHECK(tmc::sample_loss(uniform, y, 1.0) ==
          doctest::Approx(tmc::ace_loss(uniform, y)).epsilon(1e-12));
  }
  SUBCASE("lambda 1 is the oracle-checked sum of the parts") {
    const double expected = tmc::ace_loss(alpha, y) +
                            tmc::kl_to_uniform(tmc::adjusted_alpha(alpha, y));
    CHECK(tmc::sample_loss(alpha, y, 1.0) == doctest::Approx(expected).epsilon(1e-14));
    // Both parts against their oracles.
    CHECK(tmc::ace_loss(alpha, y) == doctest::Approx(0.7456349206349206).epsilon(1e-12));
    CHECK(tmc::kl_to_uniform(tmc::adjusted_alpha(alpha, y)) ==
          doctest::Approx(0.5511973816621554).epsilon(1e-12));
  }
  SUBCASE("lambda outside [0,1] is rejected") {
    CHECK_THROWS_AS(tmc::sample_loss(alpha, y, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(tmc::sample_loss(alpha, y, 1.5), std::invalid_argument);
  }
}

TEST_CASE("overall_loss composes and is permutation invariant") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> dist(0.2, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3;
    auto draw = [&]() {
      Eigen::VectorXd a(k);
      for (int i = 0; i < k; ++i) a[i] = dist(rng);
      return DirichletParams(a);
    };
    const DirichletParams joint = draw();
    const std::vector<DirichletParams> views = {draw(), draw(), draw()};
    const LabelOneHot y(static_cast<int>(rng() % k), k);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    double expected = tmc::sample_loss(joint, y, lambda);
    for (const auto& view : views) expected += tmc::sample_loss(view, y, lambda);
    const double actual = tmc::overall_loss(joint, views, y, lambda);
    CHECK(std::abs(actual - expected) < 1e-12);

    const std::vector<DirichletParams> permuted = {views[2], views[0], views[1]};
    CHECK(tmc::overall_loss(joint, permuted, y, lambda) == doctest::Approx(actual).epsilon(1e-14));
  }

  SUBCASE("single view equal to the joint doubles the sample loss") {
    const DirichletParams alpha(vec({4, 2, 6}));
    const LabelOneHot y(2, 3);
    CHECK(tmc::overall_loss(alpha, {alpha}, y, 0.5) ==
          doctest::Approx(2.0 * tmc::sample_loss(alpha, y, 0.5)).epsilon(1e-14));
  }
  SUBCASE("all uniform gives (V+1) times the uniform ace loss") {
    const DirichletParams uniform(vec({1, 1, 1}));
    const LabelOneHot y(1, 3);
    const std::vector<DirichletParams> views(3, uniform);
    CHECK(tmc::overall_loss(uniform, views, y, 1.0) ==
          doctest::Approx(4.0 * tmc::ace_loss(uniform, y)).epsilon(1e-12));
  }
}

TEST_CASE("grad_sample_loss frozen two-class example") {
  // lambda = 0, alpha = (1, 1), ground truth 0:
  // (psi'(2) - psi'(1), psi'(2)) = (-1, pi^2/6 - 1).
  const Eigen::VectorXd grad =
      tmc::grad_sample_loss(DirichletParams(vec({1, 1})), LabelOneHot(0, 2), 0.0);
  CHECK(grad[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(grad[1] == doctest::Approx(0.6449340668482264).epsilon(1e-12));
}

TEST_CASE("grad_sample_loss KL part vanishes on the ground-truth slot") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> dist(0.3, 15.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    Eigen::VectorXd alpha(k);
    for (int i = 0; i < k; ++i) alpha[i] = dist(rng);
    const int gt = static_cast<int>(rng() % k);
    const LabelOneHot y(gt, k);
    const DirichletParams d(alpha);
    const Eigen::VectorXd ace_only = tmc::grad_sample_loss(d, y, 0.0);
    const Eigen::VectorXd with_kl = tmc::grad_sample_loss(d, y, 1.0);
    CHECK(with_kl[gt] == ace_only[gt]);
  }
}

TEST_CASE("grad_sample_loss matches central finite differences") {
  std::mt19937_64 rng(139);
  std::uniform_real_distribution<double> alpha_dist(0.2, 15.0);
  std::uniform_real_distribution<double> lambda_dist(0.0, 1.0);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 5);
    Eigen::VectorXd alpha(k);
    for (int i = 0; i < k; ++i) alpha[i] = alpha_dist(rng);
    const LabelOneHot y(static_cast<int>(rng() % k), k);
    const double lambda = lambda_dist(rng);

    const Eigen::VectorXd grad = tmc::grad_sample_loss(DirichletParams(alpha), y, lambda);
    for (int m = 0; m < k; ++m) {
      const double fd = tmc::oracle::central_difference(
          [&](double t) {
            Eigen::VectorXd shifted = alpha;
            shifted[m] = t;
            return tmc::sample_loss(DirichletParams(shifted), y, lambda);
          },
          alpha[m], h);
      CHECK_MESSAGE(close_rel(grad[m], fd, 1e-5), "component ", m, " trial ", trial);
    }
  }
}

TEST_CASE("anneal schedule shape") {
  const AnnealSchedule schedule(50);
  CHECK(schedule.lambda_at(0) == 0.0);
  CHECK(schedule.lambda_at(25) == doctest::Approx(0.5));
  CHECK(schedule.lambda_at(50) == 1.0);
  CHECK(schedule.lambda_at(500) == 1.0);
  double prev = -1.0;
  for (int t = 0; t <= 120; ++t) {
    const double cur = schedule.lambda_at(t);
    CHECK(cur >= prev);
    CHECK(cur >= 0.0);
    CHECK(cur <= 1.0);
    prev = cur;
  }
  CHECK_THROWS_AS(AnnealSchedule(0), std::invalid_argument);
  CHECK_THROWS_AS(LabelOneHot(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(LabelOneHot(-1, 3), std::invalid_argument);
}
