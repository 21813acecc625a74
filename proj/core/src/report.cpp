#include "tmc/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tmc/csv.hpp"

namespace tmc {

namespace {

constexpr double kConsistencyTolerance = 1e-12;

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_close(std::optional<double> stored, std::optional<double> derived, const char* what) {
  if (stored.has_value() != derived.has_value()) {
    throw std::runtime_error(std::string("report: stored ") + what +
                             " presence disagrees with records");
  }
  if (stored && std::abs(*stored - *derived) > kConsistencyTolerance) {
    throw std::runtime_error(std::string("report: stored ") + what +
                             " disagrees with value recomputed from records");
  }
}

}  // namespace

ExperimentReport ExperimentReport::from_records(nlohmann::json config,
                                                std::vector<SampleRecord> records,
                                                int class_count) {
  if (records.empty()) {
    throw std::invalid_argument("ExperimentReport: no records");
  }
  ExperimentReport report;
  report.config = std::move(config);
  report.records = std::move(records);
  report.class_count_ = class_count;
  report.accuracy = tmc::accuracy(report.records);

  int present = 0;
  {
    std::vector<char> seen(class_count, 0);
    for (const SampleRecord& r : report.records) seen[r.truth] = 1;
    for (char s : seen) present += s;
  }
  if (present >= 2) {
    AurocResult auc = auroc_multiclass(report.records, class_count);
    report.auroc = auc.value;
    report.auroc_skipped_pairs = std::move(auc.skipped_pairs);
  }

  const UncertaintyDensity density = uncertainty_density(report.records, 20);
  report.mean_uncertainty_in = density.mean_in;
  report.mean_uncertainty_ood = density.mean_ood;
  report.threshold_points = threshold_curve(report.records, default_threshold_grid());
  return report;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["config"] = config;
  j["class_count"] = class_count_;

  nlohmann::json recs = nlohmann::json::array();
  for (const SampleRecord& r : records) {
    recs.push_back({{"truth", r.truth},
                    {"predicted", r.predicted},
                    {"joint_uncertainty", r.joint_uncertainty},
                    {"scores", to_std(r.scores)},
                    {"view_uncertainties", to_std(r.view_uncertainties)},
                    {"ood", r.ood}});
  }
  j["records"] = std::move(recs);

  nlohmann::json agg;
  agg["accuracy"] = accuracy;
  agg["count"] = records.size();
  if (auroc) agg["auroc"] = *auroc;
  if (!auroc_skipped_pairs.empty()) agg["auroc_skipped_pairs"] = auroc_skipped_pairs;
  if (mean_uncertainty_in) agg["mean_uncertainty_in"] = *mean_uncertainty_in;
  if (mean_uncertainty_ood) agg["mean_uncertainty_ood"] = *mean_uncertainty_ood;
  j["aggregates"] = std::move(agg);

  nlohmann::json curve = nlohmann::json::array();
  for (const ThresholdPoint& p : threshold_points) {
    nlohmann::json point;
    point["threshold"] = p.threshold;
    point["accuracy"] = p.accuracy ? nlohmann::json(*p.accuracy) : nlohmann::json(nullptr);
    point["retained_fraction"] = p.retained_fraction;
    curve.push_back(std::move(point));
  }
  j["threshold_curve"] = std::move(curve);
  return j;
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  std::vector<SampleRecord> records;
  for (const auto& rec : j.at("records")) {
    SampleRecord r;
    r.truth = rec.at("truth").get<int>();
    r.predicted = rec.at("predicted").get<int>();
    r.joint_uncertainty = rec.at("joint_uncertainty").get<double>();
    r.scores = to_eigen(rec.at("scores").get<std::vector<double>>());
    r.view_uncertainties = to_eigen(rec.at("view_uncertainties").get<std::vector<double>>());
    r.ood = rec.at("ood").get<bool>();
    records.push_back(std::move(r));
  }
  ExperimentReport derived =
      from_records(j.at("config"), std::move(records), j.at("class_count").get<int>());

  const nlohmann::json& agg = j.at("aggregates");
  check_close(agg.at("accuracy").get<double>(), derived.accuracy, "accuracy");
  std::optional<double> stored_auroc;
  if (agg.contains("auroc")) stored_auroc = agg.at("auroc").get<double>();
  check_close(stored_auroc, derived.auroc, "auroc");
  std::optional<double> stored_in, stored_ood;
  if (agg.contains("mean_uncertainty_in")) {
    stored_in = agg.at("mean_uncertainty_in").get<double>();
  }
  if (agg.contains("mean_uncertainty_ood")) {
    stored_ood = agg.at("mean_uncertainty_ood").get<double>();
  }
  check_close(stored_in, derived.mean_uncertainty_in, "mean_uncertainty_in");
  check_close(stored_ood, derived.mean_uncertainty_ood, "mean_uncertainty_ood");
  return derived;
}

void ExperimentReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << to_json().dump(2) << '\n';
}

ExperimentReport ExperimentReport::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

void ExperimentReport::write_threshold_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (const ThresholdPoint& p : threshold_points) {
    out << csv::format_double(p.threshold) << ','
        << csv::format_double(p.accuracy.value_or(std::nan(""))) << ','
        << csv::format_double(p.retained_fraction) << '\n';
  }
}

void ExperimentReport::write_density_csv(const std::filesystem::path& path, int bins) const {
  const UncertaintyDensity density = uncertainty_density(records, bins);
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (const DensityBin& bin : density.bins) {
    out << csv::format_double(bin.lo) << ',' << csv::format_double(bin.hi) << ','
        << csv::format_double(bin.in_density) << ',' << csv::format_double(bin.ood_density)
        << '\n';
  }
}

}  // namespace tmc
