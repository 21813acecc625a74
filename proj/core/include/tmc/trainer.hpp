#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmc/checkpoint.hpp"
#include "tmc/dataset.hpp"
#include "tmc/fusion.hpp"
#include "tmc/network.hpp"
#include "tmc/report.hpp"

namespace tmc {

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 1e-3;
  int batch_size = 0;  // 0 = full batch
  int annealing_epochs = 50;
  double l2 = 1e-4;
  std::uint64_t seed = 42;
  std::vector<int> hidden_dims = {64};
  EvidenceActivation activation = EvidenceActivation::rectifier;
  double test_fraction = 0.2;

  void validate() const;
  nlohmann::json to_json() const;
};

/// One evidential net per view; evaluation fuses their opinions.
struct TmcModel {
  std::vector<EvidentialNet> nets;
  int class_count = 0;
};

/// Softmax-head net over concatenated features, the robustness baseline.
struct BaselineModel {
  Mlp net;
  int class_count = 0;

  Eigen::VectorXd probabilities(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct LossPoint {
  int epoch = 0;
  double lambda = 0.0;
  double loss = 0.0;
};

TmcModel init_tmc_model(const std::vector<int>& input_dims, int class_count,
                        const TrainConfig& config);

/// The training loop: per sample, per-view evidence -> opinions -> fused
/// joint Dirichlet -> multi-task loss; backprop through the fusion; one Adam
/// update per batch (gradients averaged over the batch, L2 added by the
/// optimizer). Expects pre-normalized features. Deterministic in config.seed.
/// Throws divergence_error if the loss stops being finite.
std::pair<TmcModel, std::vector<LossPoint>> train(const MultiViewDataset& ds,
                                                  const std::vector<int>& train_indices,
                                                  const TrainConfig& config);

/// Same budget and optimizer, concatenated features, cross-entropy loss.
std::pair<BaselineModel, std::vector<LossPoint>> baseline_concat_softmax(
    const MultiViewDataset& ds, const std::vector<int>& train_indices,
    const TrainConfig& config);

/// Per-sample joint opinion on the listed samples of the raw dataset;
/// prediction is the argmax of the joint expected probabilities, uncertainty
/// the joint u. When noise is given it is injected (deterministically) into
/// the raw features before inference -- i.e. before the train-fitted
/// normalization -- and the affected samples are flagged OOD in the report.
ExperimentReport evaluate(const TmcModel& model, const Normalizer& normalizer,
                          const MultiViewDataset& raw, const std::vector<int>& indices,
                          const std::optional<NoiseSpec>& noise, nlohmann::json config_echo);

/// Baseline accuracy under the same (optional) corruption.
double evaluate_baseline_accuracy(const BaselineModel& model, const Normalizer& normalizer,
                                  const MultiViewDataset& raw, const std::vector<int>& indices,
                                  const std::optional<NoiseSpec>& noise);

struct SweepRow {
  double sigma = 0.0;
  double tmc_accuracy = 0.0;
  std::optional<double> baseline_accuracy;
};

/// Fig.-4-style robustness table: for each sigma, both models are evaluated
/// on the same noisy copy of the raw test data.
std::vector<SweepRow> noise_sweep(const TmcModel& model, const BaselineModel* baseline,
                                  const Normalizer& normalizer, const MultiViewDataset& raw,
                                  const std::vector<int>& indices,
                                  const std::vector<double>& sigmas,
                                  const std::vector<int>& noise_views, double noise_fraction,
                                  std::uint64_t seed);

/// End-to-end convenience pipeline: stratified split, train-fitted
/// normalization, training, checkpoint assembly.
struct FitResult {
  Checkpoint checkpoint;
  std::vector<LossPoint> trace;
};

FitResult fit_tmc(const MultiViewDataset& raw, const TrainConfig& config);
FitResult fit_baseline(const MultiViewDataset& raw, const TrainConfig& config);

TmcModel tmc_model_from_checkpoint(const Checkpoint& ckpt);
BaselineModel baseline_from_checkpoint(const Checkpoint& ckpt);

/// 5-fold cross-validated learning-rate selection on the training split.
struct TuneResult {
  double chosen_learning_rate = 0.0;
  std::vector<std::pair<double, double>> mean_accuracy_by_rate;
};

TuneResult tune_learning_rate(const MultiViewDataset& raw, const TrainConfig& config,
                              const std::vector<double>& grid = {3e-3, 1e-3, 3e-4, 1e-4});

}  // namespace tmc
