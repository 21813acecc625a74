#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace tmc {

/// V aligned feature matrices plus integer labels. Immutable after load;
/// all transformations return new values.
struct MultiViewDataset {
  std::string name;
  int class_count = 0;
  std::vector<Eigen::MatrixXd> views;  // each N x d_v
  Eigen::VectorXi labels;              // N entries in [0, class_count)

  int sample_count() const { return static_cast<int>(labels.size()); }
  int view_count() const { return static_cast<int>(views.size()); }
  std::vector<int> view_dims() const;

  /// Throws std::invalid_argument on row-count mismatch across views or
  /// labels outside [0, class_count).
  void validate() const;

  /// All views side by side, for the feature-concatenation baseline.
  Eigen::MatrixXd concatenated() const;
};

/// Manifest layout: {"name":..., "class_count":K, "labels":"labels.csv",
/// "views":["view0.csv", ...]}; paths are relative to the manifest file.
/// View files are headerless CSV rows of floats, labels one integer per line.
MultiViewDataset load_manifest(const std::filesystem::path& manifest_path);

/// Writes manifest.json, labels.csv and view<i>.csv into directory.
/// extra is merged into the manifest object (e.g. generator provenance).
/// Returns the manifest path.
std::filesystem::path save_dataset(const MultiViewDataset& ds,
                                   const std::filesystem::path& directory,
                                   const nlohmann::json& extra = nlohmann::json::object());

struct SplitIndices {
  std::vector<int> train;
  std::vector<int> test;
  bool stratified = true;  // false when a singleton class forced the fallback
};

/// Deterministic stratified split; every class appears in both parts when it
/// has at least two samples. Falls back to an unstratified split (with
/// stratified = false) when some class has a single sample.
SplitIndices stratified_split(const MultiViewDataset& ds, double test_fraction,
                              std::uint64_t seed);

/// Per-feature affine map to zero mean / unit variance, fitted on the
/// training rows only (variance floor 1e-8).
struct Normalizer {
  std::vector<Eigen::VectorXd> mean;   // per view
  std::vector<Eigen::VectorXd> scale;  // per view, sqrt(max(var, 1e-8))

  static Normalizer fit(const MultiViewDataset& ds, const std::vector<int>& train_indices);
  MultiViewDataset transform(const MultiViewDataset& ds) const;
  MultiViewDataset inverse_transform(const MultiViewDataset& ds) const;
};

/// Test-time corruption: zero-mean Gaussian noise of scale sigma on the
/// selected views, for a fraction of the eligible samples.
struct NoiseSpec {
  double sigma = 0.0;
  std::vector<int> affected_views;  // empty = first ceil(V/2) views
  double affected_fraction = 0.5;
  std::uint64_t seed = 0;
};

/// Default "half of the views": indices 0 .. ceil(V/2)-1.
std::vector<int> default_noise_views(int view_count);

/// Returns the noisy copy plus a per-sample flag (size N) marking the
/// noise-affected samples. Deterministic in spec.seed; the input is never
/// mutated.
std::pair<MultiViewDataset, std::vector<std::uint8_t>> inject_noise(
    const MultiViewDataset& ds, const NoiseSpec& spec, const std::vector<int>& eligible);

/// Gaussian class-conditional blobs per view. Views listed in
/// informative_views get class means with pairwise distance >=
/// separation * blob_sigma; the rest share a single mean at the origin and
/// carry no class signal. blob_sigma sets the raw feature scale, which is
/// what test-time noise of a given sigma is measured against.
struct SynthSpec {
  int class_count = 3;
  int view_count = 2;
  int samples = 600;
  std::vector<int> view_dims;          // empty = 10 per view
  std::vector<int> informative_views;  // empty = all views
  double separation = 5.0;             // in units of blob_sigma
  double blob_sigma = 5.0;
  std::uint64_t seed = 42;
};

MultiViewDataset synthesize(const SynthSpec& spec);

}  // namespace tmc
