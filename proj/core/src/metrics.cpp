#include "tmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tmc {

namespace {

// Rank AUC of "positive" scores against "negative" scores (Mann-Whitney with
// midranks for ties).
double rank_auc(const std::vector<double>& positives, const std::vector<double>& negatives) {
  struct Entry {
    double score;
    bool positive;
  };
  std::vector<Entry> all;
  all.reserve(positives.size() + negatives.size());
  for (double s : positives) all.push_back({s, true});
  for (double s : negatives) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    return a.score < b.score;
  });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t) {
      if (all[t].positive) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace

double accuracy(const std::vector<SampleRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("accuracy: no records");
  }
  long correct = 0;
  for (const SampleRecord& r : records) {
    if (r.predicted == r.truth) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

AurocResult auroc_multiclass(const std::vector<SampleRecord>& records, int class_count) {
  if (class_count < 2) {
    throw std::invalid_argument("auroc_multiclass: need at least two classes");
  }
  std::vector<std::vector<const SampleRecord*>> by_class(class_count);
  for (const SampleRecord& r : records) {
    if (r.truth < 0 || r.truth >= class_count) {
      throw std::invalid_argument("auroc_multiclass: label outside class range");
    }
    by_class[r.truth].push_back(&r);
  }

  AurocResult result;
  double total = 0.0;
  int pairs = 0;
  for (int i = 0; i < class_count; ++i) {
    for (int j = i + 1; j < class_count; ++j) {
      if (by_class[i].empty() || by_class[j].empty()) {
        result.skipped_pairs.emplace_back(i, j);
        continue;
      }
      auto scores_for = [&](int cls, int score_index) {
        std::vector<double> out;
        out.reserve(by_class[cls].size());
        for (const SampleRecord* r : by_class[cls]) out.push_back(r->scores[score_index]);
        return out;
      };
      // A(i|j): class-i scores ranked over the i-vs-j subset; A(j|i) likewise.
      const double a_ij = rank_auc(scores_for(i, i), scores_for(j, i));
      const double a_ji = rank_auc(scores_for(j, j), scores_for(i, j));
      total += 0.5 * (a_ij + a_ji);
      ++pairs;
    }
  }
  if (pairs == 0) {
    throw std::invalid_argument("auroc_multiclass: fewer than two classes present");
  }
  result.value = total / static_cast<double>(pairs);
  return result;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = static_cast<double>(i) / 100.0;
  return grid;
}

std::vector<ThresholdPoint> threshold_curve(const std::vector<SampleRecord>& records,
                                            const std::vector<double>& thresholds) {
  if (records.empty()) {
    throw std::invalid_argument("threshold_curve: no records");
  }
  std::vector<ThresholdPoint> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    long retained = 0;
    long correct = 0;
    for (const SampleRecord& r : records) {
      if (r.joint_uncertainty <= t) {
        ++retained;
        if (r.predicted == r.truth) ++correct;
      }
    }
    ThresholdPoint point;
    point.threshold = t;
    point.retained_fraction = static_cast<double>(retained) / static_cast<double>(records.size());
    if (retained > 0) {
      point.accuracy = static_cast<double>(correct) / static_cast<double>(retained);
    }
    curve.push_back(point);
  }
  return curve;
}

UncertaintyDensity uncertainty_density(const std::vector<SampleRecord>& records, int bins) {
  if (bins < 1) {
    throw std::invalid_argument("uncertainty_density: need at least one bin");
  }
  UncertaintyDensity density;
  density.bins.resize(bins);
  const double width = 1.0 / bins;
  for (int b = 0; b < bins; ++b) {
    density.bins[b].lo = b * width;
    density.bins[b].hi = (b + 1) * width;
  }
  double sum_in = 0.0, sum_ood = 0.0;
  for (const SampleRecord& r : records) {
    int b = std::min(static_cast<int>(r.joint_uncertainty / width), bins - 1);
    b = std::max(b, 0);
    if (r.ood) {
      density.bins[b].ood_density += 1.0;
      sum_ood += r.joint_uncertainty;
      ++density.count_ood;
    } else {
      density.bins[b].in_density += 1.0;
      sum_in += r.joint_uncertainty;
      ++density.count_in;
    }
  }
  for (DensityBin& bin : density.bins) {
    if (density.count_in > 0) bin.in_density /= density.count_in * width;
    if (density.count_ood > 0) bin.ood_density /= density.count_ood * width;
  }
  if (density.count_in > 0) density.mean_in = sum_in / density.count_in;
  if (density.count_ood > 0) density.mean_ood = sum_ood / density.count_ood;
  return density;
}

}  // namespace tmc
