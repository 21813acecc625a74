#pragma once

// Test-only oracles, deliberately independent of the implementation paths
// they check: the general focal-set Dempster rule, high-precision special
// function references, quadrature and Monte-Carlo integrals, and finite
// differences.

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tmc/opinion.hpp"

namespace tmc::oracle {

/// Dempster's rule over the focal elements {singletons} + {whole frame},
/// by explicit enumeration of all (K+1)^2 focal-set intersections (bitmask
/// sets): products of masses land on the intersection when it is non-empty
/// and in the conflict bucket otherwise, then everything is renormalized.
JointMass brute_force_dempster(const Opinion& m1, const Opinion& m2);

/// 50-digit references evaluated in extended precision, rounded to double.
double digamma_reference(double x);
double trigamma_reference(double x);
double ln_gamma_reference(double x);

/// Adaptive quadrature of the integral form of the adjusted cross-entropy
/// for K = 2: E_{p ~ Dir(alpha)}[-ln p_gt].
double ace_integral_k2(const Eigen::Vector2d& alpha, int ground_truth);

/// Quadrature of exp(dirichlet_log_pdf) over the simplex for K = 2 or 3;
/// should be 1 for any valid density.
double dirichlet_pdf_mass(const DirichletParams& d,
                          const std::function<double(const Eigen::VectorXd&)>& log_pdf);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo estimate of KL(Dir(alpha) || Dir(1)) from n Dirichlet draws.
MonteCarloEstimate kl_to_uniform_monte_carlo(const Eigen::VectorXd& alpha, int n,
                                             std::uint64_t seed);

/// Central finite difference (f(x+h) - f(x-h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// abs(a - b) <= tol * max(1, |a|, |b|).
bool close_rel(double a, double b, double tol);

/// Random opinion with strictly positive uncertainty: Dirichlet(1,...,1)
/// point on the (K+1)-simplex.
Opinion random_opinion(int class_count, std::mt19937_64& rng);

/// Nearest-class-mean classifier fitted on the train rows of one feature
/// matrix; returns accuracy on the test rows. A linear-classifier stand-in
/// for separability checks.
double nearest_centroid_accuracy(const Eigen::MatrixXd& features, const Eigen::VectorXi& labels,
                                 int class_count, const std::vector<int>& train,
                                 const std::vector<int>& test);

}  // namespace tmc::oracle
