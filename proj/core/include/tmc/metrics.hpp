#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tmc {

/// One evaluated sample: the fused prediction plus the uncertainty bookkeeping.
struct SampleRecord {
  int truth = 0;
  int predicted = 0;
  double joint_uncertainty = 1.0;
  Eigen::VectorXd scores;              // expected probabilities of the joint Dirichlet
  Eigen::VectorXd view_uncertainties;  // u^v per view, each in (0, 1]
  bool ood = false;
};

/// Fraction of records with predicted == truth. Throws on an empty set.
double accuracy(const std::vector<SampleRecord>& records);

struct AurocResult {
  double value = 0.0;
  /// Class pairs skipped because one side had no samples.
  std::vector<std::pair<int, int>> skipped_pairs;
};

/// Hand-Till M: the unweighted mean over class pairs (i, j) of
/// (A(i|j) + A(j|i)) / 2, where A(i|j) is the rank AUC of class-i scores on
/// the i-vs-j subset, with midranks for ties. Requires records from at least
/// two distinct classes.
AurocResult auroc_multiclass(const std::vector<SampleRecord>& records, int class_count);

struct ThresholdPoint {
  double threshold = 0.0;
  std::optional<double> accuracy;  // empty when no samples are retained
  double retained_fraction = 0.0;
};

/// 101 evenly spaced thresholds on [0, 1].
std::vector<double> default_threshold_grid();

/// Accuracy over the subset with joint uncertainty <= threshold, per threshold.
std::vector<ThresholdPoint> threshold_curve(const std::vector<SampleRecord>& records,
                                            const std::vector<double>& thresholds);

struct DensityBin {
  double lo = 0.0;
  double hi = 0.0;
  double in_density = 0.0;
  double ood_density = 0.0;
};

struct UncertaintyDensity {
  std::vector<DensityBin> bins;
  std::optional<double> mean_in;   // empty when the group has no samples
  std::optional<double> mean_ood;
  long count_in = 0;
  long count_ood = 0;
};

/// Normalized histograms of joint uncertainty over [0, 1], split by OOD flag.
UncertaintyDensity uncertainty_density(const std::vector<SampleRecord>& records, int bins);

}  // namespace tmc
