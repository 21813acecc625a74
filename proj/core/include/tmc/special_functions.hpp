#pragma once

#include <Eigen/Core>

namespace tmc {

// Scalar special functions over the positive reals, self-contained so the
// numeric core carries no external math dependency. All four throw
// std::domain_error outside their stated domain (x <= 0, NaN, inf).
//
// Accuracy, verified against a high-precision reference on [1e-3, 1e6]:
//   digamma   |err| <= 1e-12 * max(1, |psi(x)|)
//   trigamma  relative error <= 1e-10
//   ln_gamma  |err| <= 1e-12 * max(1, |ln Gamma(x)|)

/// Digamma psi(x) = d/dx ln Gamma(x). Upward recurrence to x >= 10, then the
/// asymptotic series in 1/x^2 with Bernoulli coefficients through B14.
double digamma(double x);

/// Trigamma psi'(x), same recurrence/series scheme as digamma.
double trigamma(double x);

/// ln Gamma(x) via the Stirling series above 10 and the product recurrence
/// ln Gamma(x) = ln Gamma(x + n) - ln(x (x+1) ... (x+n-1)) below.
double ln_gamma(double x);

/// ln B(alpha) = sum_k ln Gamma(alpha_k) - ln Gamma(sum_k alpha_k).
/// Requires alpha.size() >= 2 and every component positive and finite.
double ln_multinomial_beta(const Eigen::Ref<const Eigen::VectorXd>& alpha);

}  // namespace tmc
