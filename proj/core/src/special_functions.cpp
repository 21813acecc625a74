#include "tmc/special_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tmc {

namespace {

constexpr double kAsymptoticThreshold = 10.0;
constexpr double kHalfLn2Pi = 0.91893853320467274178;  // ln(2*pi)/2

void check_positive(double x, const char* fn) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(std::string(fn) + ": argument must be a finite positive real, got " +
                            std::to_string(x));
  }
}

// Asymptotic tail for x >= 10: psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}).
double digamma_asymptotic(double x) {
  const double z = 1.0 / (x * x);
  const double series =
      z * (1.0 / 12.0 -
           z * (1.0 / 120.0 -
                z * (1.0 / 252.0 -
                     z * (1.0 / 240.0 -
                          z * (1.0 / 132.0 - z * (691.0 / 32760.0 - z * (1.0 / 12.0)))))));
  return std::log(x) - 0.5 / x - series;
}

// psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2n} / x^{2n+1} for x >= 10.
double trigamma_asymptotic(double x) {
  const double z = 1.0 / (x * x);
  const double series =
      z * (1.0 / 6.0 -
           z * (1.0 / 30.0 -
                z * (1.0 / 42.0 -
                     z * (1.0 / 30.0 -
                          z * (5.0 / 66.0 - z * (691.0 / 2730.0 - z * (7.0 / 6.0)))))));
  return (1.0 + 0.5 / x + series) / x;
}

// Stirling series for x >= 10.
double ln_gamma_asymptotic(double x) {
  const double z = 1.0 / (x * x);
  const double series =
      (1.0 / 12.0 -
       z * (1.0 / 360.0 -
            z * (1.0 / 1260.0 -
                 z * (1.0 / 1680.0 -
                      z * (1.0 / 1188.0 - z * (691.0 / 360360.0 - z * (7.0 / 1092.0))))))) /
      x;
  return (x - 0.5) * std::log(x) - x + kHalfLn2Pi + series;
}

}  // namespace

double digamma(double x) {
  check_positive(x, "digamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  return shift + digamma_asymptotic(x);
}

double trigamma(double x) {
  check_positive(x, "trigamma");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  return shift + trigamma_asymptotic(x);
}

double ln_gamma(double x) {
  check_positive(x, "ln_gamma");
  double product = 1.0;
  while (x < kAsymptoticThreshold) {
    product *= x;
    x += 1.0;
  }
  return ln_gamma_asymptotic(x) - std::log(product);
}

double ln_multinomial_beta(const Eigen::Ref<const Eigen::VectorXd>& alpha) {
  if (alpha.size() < 2) {
    throw std::domain_error("ln_multinomial_beta: need at least two components");
  }
  double log_num = 0.0;
  double total = 0.0;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    check_positive(alpha[k], "ln_multinomial_beta");
    log_num += ln_gamma(alpha[k]);
    total += alpha[k];
  }
  return log_num - ln_gamma(total);
}

}  // namespace tmc
