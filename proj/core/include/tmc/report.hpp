#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmc/metrics.hpp"

namespace tmc {

/// Per-sample predictions and uncertainties with aggregate metrics, the
/// serialized result of one evaluation pass. Aggregates are always derived
/// from the records; loading re-derives and cross-checks them.
struct ExperimentReport {
  nlohmann::json config;  // resolved run configuration, seed included
  std::vector<SampleRecord> records;

  double accuracy = 0.0;
  std::optional<double> auroc;
  std::vector<std::pair<int, int>> auroc_skipped_pairs;
  std::optional<double> mean_uncertainty_in;
  std::optional<double> mean_uncertainty_ood;
  std::vector<ThresholdPoint> threshold_points;

  static ExperimentReport from_records(nlohmann::json config, std::vector<SampleRecord> records,
                                       int class_count);

  int class_count() const { return class_count_; }

  nlohmann::json to_json() const;
  /// Parses and re-derives the aggregates from the records; throws
  /// std::runtime_error if the stored aggregates disagree beyond 1e-12.
  static ExperimentReport from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static ExperimentReport load(const std::filesystem::path& path);

  /// threshold,accuracy,retained_fraction rows (accuracy "nan" when empty).
  void write_threshold_csv(const std::filesystem::path& path) const;
  /// bin_lo,bin_hi,in_density,ood_density rows.
  void write_density_csv(const std::filesystem::path& path, int bins) const;

 private:
  int class_count_ = 0;
};

}  // namespace tmc
