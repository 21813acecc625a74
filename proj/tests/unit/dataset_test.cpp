#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "tmc/csv.hpp"
#include "tmc/dataset.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tmc_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

tmc::MultiViewDataset toy_dataset() {
  tmc::MultiViewDataset ds;
  ds.name = "toy";
  ds.class_count = 2;
  Eigen::MatrixXd v0(6, 2), v1(6, 3);
  v0 << 0.25, -1.5, 1.0, 2.0, -0.125, 0.5, 3.5, -2.25, 0.0, 1.0, 2.0, -0.75;
  v1.setRandom();
  ds.views = {v0, v1};
  ds.labels.resize(6);
  ds.labels << 0, 1, 0, 1, 0, 1;
  return ds;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("save and load round-trips a toy dataset bit-exactly") {
  TempDir tmp;
  const tmc::MultiViewDataset ds = toy_dataset();
  const fs::path manifest = tmc::save_dataset(ds, tmp.path);
  const tmc::MultiViewDataset back = tmc::load_manifest(manifest);
  CHECK(back.sample_count() == 6);
  CHECK(back.view_count() == 2);
  CHECK(back.class_count == 2);
  CHECK(back.views[0] == ds.views[0]);
  CHECK(back.views[1] == ds.views[1]);
  CHECK(back.labels == ds.labels);
}

TEST_CASE("manifest validation catches the spec'd error cases") {
  TempDir tmp;
  tmc::MultiViewDataset ds = toy_dataset();
  const fs::path manifest = tmc::save_dataset(ds, tmp.path);

  SUBCASE("missing manifest") {
    CHECK_THROWS(tmc::load_manifest(tmp.path / "nope.json"));
  }
  SUBCASE("row-count mismatch across views") {
    // Drop a line from view1.csv.
    const fs::path view1 = tmp.path / "view1.csv";
    std::string contents = slurp(view1);
    contents.erase(contents.rfind('\n', contents.size() - 2) + 1);
    std::ofstream(view1, std::ios::trunc) << contents;
    CHECK_THROWS_WITH_AS(tmc::load_manifest(manifest),
                         doctest::Contains("labels"), std::invalid_argument);
  }
  SUBCASE("label out of range") {
    std::ofstream(tmp.path / "labels.csv", std::ios::trunc) << "0\n1\n0\n1\n0\n2\n";
    CHECK_THROWS_AS(tmc::load_manifest(manifest), std::invalid_argument);
  }
  SUBCASE("malformed CSV cell") {
    std::ofstream(tmp.path / "view0.csv", std::ios::app) << "1.0,abc\n";
    CHECK_THROWS_WITH_AS(tmc::load_manifest(manifest),
                         doctest::Contains("malformed number"), std::runtime_error);
  }
  SUBCASE("ragged CSV row") {
    std::ofstream(tmp.path / "view0.csv", std::ios::app) << "1.0,2.0,3.0\n";
    CHECK_THROWS_WITH_AS(tmc::load_manifest(manifest), doctest::Contains("columns"),
                         std::runtime_error);
  }
}

TEST_CASE("stratified split is deterministic, stratified, and seed-sensitive") {
  tmc::SynthSpec spec;
  spec.class_count = 10;
  spec.view_count = 1;
  spec.samples = 200;  // 20 per class
  spec.seed = 5;
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);

  const tmc::SplitIndices a = tmc::stratified_split(ds, 0.2, 11);
  const tmc::SplitIndices b = tmc::stratified_split(ds, 0.2, 11);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(a.stratified);
  CHECK(a.test.size() == 40);
  CHECK(a.train.size() == 160);

  // Each class contributes exactly fraction * 20 = 4 test samples.
  std::vector<int> per_class(10, 0);
  for (int idx : a.test) per_class[ds.labels[idx]]++;
  for (int c = 0; c < 10; ++c) CHECK(per_class[c] == 4);

  const tmc::SplitIndices c = tmc::stratified_split(ds, 0.2, 12);
  CHECK(a.test != c.test);

  // Disjoint and covering.
  std::set<int> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  CHECK(all.size() == 200);
}

TEST_CASE("split falls back to unstratified when a class is a singleton") {
  tmc::MultiViewDataset ds = toy_dataset();
  ds.class_count = 3;
  ds.labels << 0, 1, 0, 1, 0, 2;  // class 2 has a single sample
  const tmc::SplitIndices split = tmc::stratified_split(ds, 0.34, 3);
  CHECK_FALSE(split.stratified);
  CHECK(split.train.size() + split.test.size() == 6);
}

TEST_CASE("normalizer maps train statistics to zero mean unit variance") {
  tmc::SynthSpec spec;
  spec.samples = 300;
  spec.seed = 21;
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);
  const tmc::SplitIndices split = tmc::stratified_split(ds, 0.2, 21);
  const tmc::Normalizer norm = tmc::Normalizer::fit(ds, split.train);
  const tmc::MultiViewDataset scaled = norm.transform(ds);

  for (int v = 0; v < ds.view_count(); ++v) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(ds.views[v].cols());
    for (int idx : split.train) mean += scaled.views[v].row(idx).transpose();
    mean /= static_cast<double>(split.train.size());
    CHECK(mean.cwiseAbs().maxCoeff() < 1e-10);
  }

  const tmc::MultiViewDataset back = norm.inverse_transform(scaled);
  for (int v = 0; v < ds.view_count(); ++v) {
    CHECK((back.views[v] - ds.views[v]).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("a constant feature is floored to zero, not NaN") {
  tmc::MultiViewDataset ds = toy_dataset();
  ds.views[0].col(1).setConstant(7.25);
  const std::vector<int> all = {0, 1, 2, 3, 4, 5};
  const tmc::Normalizer norm = tmc::Normalizer::fit(ds, all);
  const tmc::MultiViewDataset scaled = norm.transform(ds);
  CHECK(scaled.views[0].col(1).isZero(0.0));
  CHECK(scaled.views[0].allFinite());
}

TEST_CASE("inject_noise identity, determinism, and variance") {
  tmc::SynthSpec spec;
  spec.samples = 2000;
  spec.view_count = 2;
  spec.seed = 33;
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);
  std::vector<int> eligible(ds.sample_count());
  std::iota(eligible.begin(), eligible.end(), 0);

  SUBCASE("sigma 0 keeps the data, mask still marks the fraction") {
    tmc::NoiseSpec noise{0.0, {0}, 0.5, 9};
    const auto [noisy, mask] = tmc::inject_noise(ds, noise, eligible);
    CHECK(noisy.views[0] == ds.views[0]);
    CHECK(noisy.views[1] == ds.views[1]);
    long marked = 0;
    for (auto f : mask) marked += f;
    CHECK(marked == 1000);
  }

  SUBCASE("deterministic given the seed, input untouched") {
    tmc::NoiseSpec noise{10.0, {0}, 0.5, 17};
    const Eigen::MatrixXd before = ds.views[0];
    const auto [a, mask_a] = tmc::inject_noise(ds, noise, eligible);
    const auto [b, mask_b] = tmc::inject_noise(ds, noise, eligible);
    CHECK(a.views[0] == b.views[0]);
    CHECK(mask_a == mask_b);
    CHECK(ds.views[0] == before);
  }

  SUBCASE("only the selected views change, only for masked samples") {
    tmc::NoiseSpec noise{4.0, {1}, 0.3, 23};
    const auto [noisy, mask] = tmc::inject_noise(ds, noise, eligible);
    CHECK(noisy.views[0] == ds.views[0]);
    for (int i = 0; i < ds.sample_count(); ++i) {
      if (!mask[i]) {
        CHECK(noisy.views[1].row(i) == ds.views[1].row(i));
      } else {
        CHECK(noisy.views[1].row(i) != ds.views[1].row(i));
      }
    }
  }

  SUBCASE("sample variance of the added noise is close to sigma^2") {
    tmc::NoiseSpec noise{10.0, {0, 1}, 1.0, 29};
    const auto [noisy, mask] = tmc::inject_noise(ds, noise, eligible);
    double sum = 0.0, sum_sq = 0.0;
    long n = 0;
    for (int v = 0; v < 2; ++v) {
      const Eigen::MatrixXd delta = noisy.views[v] - ds.views[v];
      sum += delta.sum();
      sum_sq += delta.array().square().sum();
      n += delta.size();
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(var == doctest::Approx(100.0).epsilon(0.05));
  }

  SUBCASE("bad view index is rejected") {
    tmc::NoiseSpec noise{1.0, {5}, 0.5, 1};
    CHECK_THROWS_AS(tmc::inject_noise(ds, noise, eligible), std::invalid_argument);
  }
}

TEST_CASE("synthesize: separable views support a linear oracle, noise views do not") {
  tmc::SynthSpec spec;
  spec.class_count = 3;
  spec.view_count = 2;
  spec.samples = 600;
  spec.informative_views = {0};  // view 1 carries no signal
  spec.seed = 42;
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);
  const tmc::SplitIndices split = tmc::stratified_split(ds, 0.2, 42);

  const double informative = tmc::oracle::nearest_centroid_accuracy(
      ds.views[0], ds.labels, 3, split.train, split.test);
  CHECK(informative > 0.95);

  const double noise_only = tmc::oracle::nearest_centroid_accuracy(
      ds.views[1], ds.labels, 3, split.train, split.test);
  CHECK(noise_only > 1.0 / 3.0 - 0.05);
  CHECK(noise_only < 1.0 / 3.0 + 0.05);
}

TEST_CASE("synthesize with both views informative is fully separable") {
  tmc::SynthSpec spec;  // defaults: K=3, V=2, N=600, both informative
  spec.seed = 42;
  const tmc::MultiViewDataset ds = tmc::synthesize(spec);
  const tmc::SplitIndices split = tmc::stratified_split(ds, 0.2, 42);
  const double acc = tmc::oracle::nearest_centroid_accuracy(
      ds.concatenated(), ds.labels, 3, split.train, split.test);
  CHECK(acc > 0.95);

  const tmc::MultiViewDataset again = tmc::synthesize(spec);
  CHECK(again.views[0] == ds.views[0]);
  CHECK(again.views[1] == ds.views[1]);
  CHECK(again.labels == ds.labels);
}

TEST_CASE("csv format_double round-trips exactly") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 7) - 3);
    const std::string s = tmc::csv::format_double(x);
    CHECK(std::stod(s) == x);
  }
}
