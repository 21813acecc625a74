#include "tmc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tmc/csv.hpp"
#include "tmc/rng.hpp"

namespace tmc {

namespace {

constexpr double kVarianceFloor = 1e-8;

void check_view_index(const MultiViewDataset& ds, int view) {
  if (view < 0 || view >= ds.view_count()) {
    throw std::invalid_argument("view index " + std::to_string(view) + " outside [0, " +
                                std::to_string(ds.view_count()) + ")");
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return j;
}

int rounded_count(double fraction, std::size_t n) {
  return static_cast<int>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

}  // namespace

std::vector<int> MultiViewDataset::view_dims() const {
  std::vector<int> dims;
  dims.reserve(views.size());
  for (const auto& v : views) dims.push_back(static_cast<int>(v.cols()));
  return dims;
}

void MultiViewDataset::validate() const {
  if (class_count < 2) {
    throw std::invalid_argument("dataset '" + name + "': class_count must be >= 2");
  }
  if (views.empty()) {
    throw std::invalid_argument("dataset '" + name + "': no views");
  }
  const Eigen::Index n = labels.size();
  for (std::size_t v = 0; v < views.size(); ++v) {
    if (views[v].rows() != n) {
      throw std::invalid_argument("dataset '" + name + "': view " + std::to_string(v) + " has " +
                                  std::to_string(views[v].rows()) + " rows but there are " +
                                  std::to_string(n) + " labels");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= class_count) {
      throw std::invalid_argument("dataset '" + name + "': label " + std::to_string(labels[i]) +
                                  " at row " + std::to_string(i) + " outside [0, " +
                                  std::to_string(class_count) + ")");
    }
  }
}

Eigen::MatrixXd MultiViewDataset::concatenated() const {
  Eigen::Index total = 0;
  for (const auto& v : views) total += v.cols();
  Eigen::MatrixXd all(labels.size(), total);
  Eigen::Index offset = 0;
  for (const auto& v : views) {
    all.middleCols(offset, v.cols()) = v;
    offset += v.cols();
  }
  return all;
}

MultiViewDataset load_manifest(const std::filesystem::path& manifest_path) {
  const nlohmann::json manifest = read_json_file(manifest_path);
  for (const char* key : {"class_count", "labels", "views"}) {
    if (!manifest.contains(key)) {
      throw std::runtime_error(manifest_path.string() + ": manifest is missing \"" +
                               std::string(key) + "\"");
    }
  }
  const std::filesystem::path base = manifest_path.parent_path();
  MultiViewDataset ds;
  ds.name = manifest.value("name", manifest_path.stem().string());
  ds.class_count = manifest.at("class_count").get<int>();
  ds.labels = csv::read_int_column(base / manifest.at("labels").get<std::string>());
  for (const auto& view_file : manifest.at("views")) {
    ds.views.push_back(csv::read_matrix(base / view_file.get<std::string>()));
  }
  ds.validate();
  return ds;
}

std::filesystem::path save_dataset(const MultiViewDataset& ds,
                                   const std::filesystem::path& directory,
                                   const nlohmann::json& extra) {
  ds.validate();
  std::filesystem::create_directories(directory);
  nlohmann::json manifest = extra;
  manifest["name"] = ds.name;
  manifest["class_count"] = ds.class_count;
  manifest["labels"] = "labels.csv";
  std::vector<std::string> view_files;
  for (int v = 0; v < ds.view_count(); ++v) {
    view_files.push_back("view" + std::to_string(v) + ".csv");
  }
  manifest["views"] = view_files;

  csv::write_int_column(directory / "labels.csv", ds.labels);
  for (int v = 0; v < ds.view_count(); ++v) {
    csv::write_matrix(directory / view_files[v], ds.views[v]);
  }
  const std::filesystem::path manifest_path = directory / "manifest.json";
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + manifest_path.string() + " for writing");
  }
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

SplitIndices stratified_split(const MultiViewDataset& ds, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  const int n = ds.sample_count();
  if (n < 2) {
    throw std::invalid_argument("cannot split fewer than two samples");
  }
  std::vector<std::vector<int>> by_class(ds.class_count);
  for (int i = 0; i < n; ++i) by_class[ds.labels[i]].push_back(i);

  const bool can_stratify =
      std::none_of(by_class.begin(), by_class.end(),
                   [](const std::vector<int>& c) { return c.size() == 1; });

  std::mt19937_64 rng = substream_rng(seed, "split");
  SplitIndices split;
  split.stratified = can_stratify;

  if (can_stratify) {
    for (auto& members : by_class) {
      if (members.empty()) continue;
      std::shuffle(members.begin(), members.end(), rng);
      int test_count = rounded_count(test_fraction, members.size());
      test_count = std::clamp(test_count, 1, static_cast<int>(members.size()) - 1);
      for (std::size_t i = 0; i < members.size(); ++i) {
        (static_cast<int>(i) < test_count ? split.test : split.train).push_back(members[i]);
      }
    }
  } else {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    int test_count = std::clamp(rounded_count(test_fraction, order.size()), 1, n - 1);
    split.test.assign(order.begin(), order.begin() + test_count);
    split.train.assign(order.begin() + test_count, order.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Normalizer Normalizer::fit(const MultiViewDataset& ds, const std::vector<int>& train_indices) {
  if (train_indices.empty()) {
    throw std::invalid_argument("Normalizer::fit: empty training set");
  }
  Normalizer norm;
  const double count = static_cast<double>(train_indices.size());
  for (const Eigen::MatrixXd& view : ds.views) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(view.cols());
    for (int idx : train_indices) mean += view.row(idx).transpose();
    mean /= count;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(view.cols());
    for (int idx : train_indices) {
      var += (view.row(idx).transpose() - mean).array().square().matrix();
    }
    var /= count;
    norm.mean.push_back(std::move(mean));
    norm.scale.push_back(var.array().max(kVarianceFloor).sqrt().matrix());
  }
  return norm;
}

MultiViewDataset Normalizer::transform(const MultiViewDataset& ds) const {
  if (ds.views.size() != mean.size()) {
    throw std::invalid_argument("Normalizer: view count mismatch");
  }
  MultiViewDataset out = ds;
  for (std::size_t v = 0; v < out.views.size(); ++v) {
    for (Eigen::Index c = 0; c < out.views[v].cols(); ++c) {
      out.views[v].col(c) = (out.views[v].col(c).array() - mean[v][c]) / scale[v][c];
    }
  }
  return out;
}

MultiViewDataset Normalizer::inverse_transform(const MultiViewDataset& ds) const {
  if (ds.views.size() != mean.size()) {
    throw std::invalid_argument("Normalizer: view count mismatch");
  }
  MultiViewDataset out = ds;
  for (std::size_t v = 0; v < out.views.size(); ++v) {
    for (Eigen::Index c = 0; c < out.views[v].cols(); ++c) {
      out.views[v].col(c) = out.views[v].col(c).array() * scale[v][c] + mean[v][c];
    }
  }
  return out;
}

std::vector<int> default_noise_views(int view_count) {
  std::vector<int> views;
  for (int v = 0; v < (view_count + 1) / 2; ++v) views.push_back(v);
  return views;
}

std::pair<MultiViewDataset, std::vector<std::uint8_t>> inject_noise(
    const MultiViewDataset& ds, const NoiseSpec& spec, const std::vector<int>& eligible) {
  if (spec.sigma < 0.0 || !(spec.affected_fraction >= 0.0 && spec.affected_fraction <= 1.0)) {
    throw std::invalid_argument("inject_noise: invalid sigma or fraction");
  }
  std::vector<int> views = spec.affected_views.empty() ? default_noise_views(ds.view_count())
                                                       : spec.affected_views;
  for (int v : views) check_view_index(ds, v);
  for (int idx : eligible) {
    if (idx < 0 || idx >= ds.sample_count()) {
      throw std::invalid_argument("inject_noise: sample index out of range");
    }
  }

  std::mt19937_64 rng = substream_rng(spec.seed, "noise");
  std::vector<int> chosen = eligible;
  std::shuffle(chosen.begin(), chosen.end(), rng);
  const int affected = rounded_count(spec.affected_fraction, chosen.size());
  chosen.resize(affected);
  std::sort(chosen.begin(), chosen.end());

  MultiViewDataset noisy = ds;
  std::vector<std::uint8_t> mask(ds.sample_count(), 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int idx : chosen) {
    mask[idx] = 1;
    for (int v : views) {
      for (Eigen::Index c = 0; c < noisy.views[v].cols(); ++c) {
        noisy.views[v](idx, c) += spec.sigma * gauss(rng);
      }
    }
  }
  return {std::move(noisy), std::move(mask)};
}

MultiViewDataset synthesize(const SynthSpec& spec) {
  if (spec.class_count < 2 || spec.view_count < 1 || spec.samples < spec.class_count) {
    throw std::invalid_argument("synthesize: need K >= 2, V >= 1, N >= K");
  }
  if (!(spec.blob_sigma > 0.0) || !(spec.separation > 0.0)) {
    throw std::invalid_argument("synthesize: blob_sigma and separation must be positive");
  }
  std::vector<int> dims = spec.view_dims;
  if (dims.empty()) dims.assign(spec.view_count, 10);
  if (static_cast<int>(dims.size()) != spec.view_count) {
    throw std::invalid_argument("synthesize: view_dims size mismatch");
  }
  std::vector<int> informative = spec.informative_views;
  if (informative.empty()) {
    informative.resize(spec.view_count);
    std::iota(informative.begin(), informative.end(), 0);
  }

  MultiViewDataset ds;
  ds.name = "synthetic";
  ds.class_count = spec.class_count;
  ds.labels.resize(spec.samples);
  for (int i = 0; i < spec.samples; ++i) ds.labels[i] = i % spec.class_count;

  std::mt19937_64 rng = substream_rng(spec.seed, "synth");
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int v = 0; v < spec.view_count; ++v) {
    const int d = dims[v];
    const bool is_informative =
        std::find(informative.begin(), informative.end(), v) != informative.end();

    // Class means: random directions rescaled so the closest pair sits
    // exactly at the separation target (all pairs at least that far apart).
    // Non-informative views share a mean at the origin.
    const double min_distance = spec.separation * spec.blob_sigma;
    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(spec.class_count, d);
    if (is_informative) {
      double min_dist = 0.0;
      while (min_dist < 1e-9) {  // guards against degenerate draws
        for (int k = 0; k < spec.class_count; ++k) {
          for (int c = 0; c < d; ++c) means(k, c) = gauss(rng);
        }
        min_dist = std::numeric_limits<double>::infinity();
        for (int a = 0; a < spec.class_count; ++a) {
          for (int b = a + 1; b < spec.class_count; ++b) {
            min_dist = std::min(min_dist, (means.row(a) - means.row(b)).norm());
          }
        }
      }
      means *= min_distance / min_dist;
    }

    Eigen::MatrixXd view(spec.samples, d);
    for (int i = 0; i < spec.samples; ++i) {
      for (int c = 0; c < d; ++c) {
        view(i, c) = means(ds.labels[i], c) + spec.blob_sigma * gauss(rng);
      }
    }
    ds.views.push_back(std::move(view));
  }
  ds.validate();
  return ds;
}

}  // namespace tmc
