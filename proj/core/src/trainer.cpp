#include "tmc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tmc/adam.hpp"
#include "tmc/errors.hpp"
#include "tmc/losses.hpp"
#include "tmc/opinion.hpp"
#include "tmc/rng.hpp"

namespace tmc {

namespace {

std::vector<std::vector<int>> make_batches(const std::vector<int>& indices, int batch_size,
                                           std::mt19937_64* shuffle_rng) {
  std::vector<int> order = indices;
  if (shuffle_rng) {
    std::shuffle(order.begin(), order.end(), *shuffle_rng);
  }
  std::vector<std::vector<int>> batches;
  if (batch_size <= 0 || batch_size >= static_cast<int>(order.size())) {
    batches.push_back(std::move(order));
    return batches;
  }
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t stop = std::min(order.size(), start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + stop);
  }
  return batches;
}

// Corrupt the raw features (if requested), then apply the train-fitted
// normalization: noise lives in raw feature units, like the data itself.
MultiViewDataset prepare_eval_data(const MultiViewDataset& raw, const Normalizer& normalizer,
                                   const std::optional<NoiseSpec>& noise,
                                   const std::vector<int>& indices,
                                   std::vector<std::uint8_t>& mask_out) {
  if (!noise) {
    mask_out.assign(raw.sample_count(), 0);
    return normalizer.transform(raw);
  }
  auto [noisy, mask] = inject_noise(raw, *noise, indices);
  mask_out = std::move(mask);
  return normalizer.transform(noisy);
}

nlohmann::json noise_to_json(const NoiseSpec& spec) {
  return {{"sigma", spec.sigma},
          {"affected_views", spec.affected_views},
          {"affected_fraction", spec.affected_fraction},
          {"seed", spec.seed}};
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be > 0");
  if (annealing_epochs < 1) throw std::invalid_argument("TrainConfig: annealing_epochs must be >= 1");
  if (l2 < 0.0) throw std::invalid_argument("TrainConfig: l2 must be >= 0");
  if (batch_size < 0) throw std::invalid_argument("TrainConfig: batch_size must be >= 0");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("TrainConfig: test_fraction must lie in (0, 1)");
  }
  for (int h : hidden_dims) {
    if (h < 1) throw std::invalid_argument("TrainConfig: hidden widths must be positive");
  }
}

nlohmann::json TrainConfig::to_json() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"batch_size", batch_size},
          {"annealing_epochs", annealing_epochs},
          {"l2", l2},
          {"seed", seed},
          {"hidden_dims", hidden_dims},
          {"evidence_activation", to_string(activation)},
          {"test_fraction", test_fraction}};
}

TmcModel init_tmc_model(const std::vector<int>& input_dims, int class_count,
                        const TrainConfig& config) {
  TmcModel model;
  model.class_count = class_count;
  std::mt19937_64 rng = substream_rng(config.seed, "init");
  for (int dim : input_dims) {
    model.nets.push_back(EvidentialNet::glorot_init(dim, config.hidden_dims, class_count,
                                                    config.activation, rng));
  }
  return model;
}

std::pair<TmcModel, std::vector<LossPoint>> train(const MultiViewDataset& ds,
                                                  const std::vector<int>& train_indices,
                                                  const TrainConfig& config) {
  config.validate();
  ds.validate();
  if (train_indices.empty()) {
    throw std::invalid_argument("train: empty training split");
  }

  TmcModel model = init_tmc_model(ds.view_dims(), ds.class_count, config);
  const int views = ds.view_count();
  const int k = ds.class_count;

  AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  adam_config.weight_decay = config.l2;
  AdamOptimizer optimizer(adam_config);

  std::vector<MlpGrads> grads;
  std::vector<TensorRef> param_refs, grad_refs;
  for (EvidentialNet& net : model.nets) {
    grads.push_back(net.mlp().make_grads());
    for (TensorRef ref : net.mlp().parameters()) param_refs.push_back(ref);
  }
  for (MlpGrads& g : grads) {
    for (TensorRef ref : g.tensors()) grad_refs.push_back(ref);
  }

  const AnnealSchedule schedule(config.annealing_epochs);
  std::mt19937_64 shuffle_rng = substream_rng(config.seed, "shuffle");
  const bool minibatched = config.batch_size > 0;

  std::vector<Mlp::Cache> caches(views);
  std::vector<Eigen::VectorXd> evidences(views);
  std::vector<LossPoint> trace;
  trace.reserve(config.epochs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lambda = schedule.lambda_at(epoch);
    double epoch_loss = 0.0;

    for (const std::vector<int>& batch :
         make_batches(train_indices, config.batch_size, minibatched ? &shuffle_rng : nullptr)) {
      for (MlpGrads& g : grads) g.set_zero();
      double batch_loss = 0.0;

      for (int idx : batch) {
        const LabelOneHot label(ds.labels[idx], k);
        for (int v = 0; v < views; ++v) {
          evidences[v] = model.nets[v].forward(ds.views[v].row(idx).transpose(), &caches[v]);
          if (!evidences[v].allFinite()) {
            throw divergence_error("train: evidence became non-finite at epoch " +
                                   std::to_string(epoch));
          }
        }
        auto [joint, tape] = [&] {
          try {
            return fuse_forward(evidences);
          } catch (const conflict_error&) {
            // Learned opinions in total conflict: training has diverged.
            throw divergence_error("train: views reached total conflict at epoch " +
                                   std::to_string(epoch));
          }
        }();

        double loss = sample_loss(joint, label, lambda);
        const Eigen::VectorXd grad_joint = grad_sample_loss(joint, label, lambda);
        const std::vector<Eigen::VectorXd> fused_grads = fuse_backward(tape, grad_joint);

        for (int v = 0; v < views; ++v) {
          const DirichletParams view_alpha{tape.view_alphas[v]};
          loss += sample_loss(view_alpha, label, lambda);
          const Eigen::VectorXd grad_evidence =
              fused_grads[v] + grad_sample_loss(view_alpha, label, lambda);
          model.nets[v].backward(caches[v], grad_evidence, grads[v]);
        }
        batch_loss += loss;
      }

      if (!std::isfinite(batch_loss)) {
        throw divergence_error("train: loss became non-finite at epoch " + std::to_string(epoch));
      }
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (MlpGrads& g : grads) g.scale(inv);
      optimizer.step(param_refs, grad_refs);
      epoch_loss += batch_loss;
    }

    trace.push_back({epoch, lambda, epoch_loss / static_cast<double>(train_indices.size())});
  }
  return {std::move(model), std::move(trace)};
}

Eigen::VectorXd BaselineModel::probabilities(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd logits = net.forward(x);
  const double m = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - m).exp();
  return p / p.sum();
}

std::pair<BaselineModel, std::vector<LossPoint>> baseline_concat_softmax(
    const MultiViewDataset& ds, const std::vector<int>& train_indices,
    const TrainConfig& config) {
  config.validate();
  ds.validate();
  if (train_indices.empty()) {
    throw std::invalid_argument("baseline_concat_softmax: empty training split");
  }

  const Eigen::MatrixXd features = ds.concatenated();
  const int k = ds.class_count;

  std::mt19937_64 init_rng = substream_rng(config.seed, "init");
  BaselineModel model{
      Mlp::glorot_init(static_cast<int>(features.cols()), config.hidden_dims, k, init_rng), k};

  AdamConfig adam_config;
  adam_config.learning_rate = config.learning_rate;
  adam_config.weight_decay = config.l2;
  AdamOptimizer optimizer(adam_config);

  MlpGrads grads = model.net.make_grads();
  std::vector<TensorRef> param_refs = model.net.parameters();
  std::vector<TensorRef> grad_refs = grads.tensors();

  std::mt19937_64 shuffle_rng = substream_rng(config.seed, "shuffle");
  const bool minibatched = config.batch_size > 0;
  Mlp::Cache cache;
  std::vector<LossPoint> trace;
  trace.reserve(config.epochs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (const std::vector<int>& batch :
         make_batches(train_indices, config.batch_size, minibatched ? &shuffle_rng : nullptr)) {
      grads.set_zero();
      double batch_loss = 0.0;
      for (int idx : batch) {
        const Eigen::VectorXd logits = model.net.forward(features.row(idx).transpose(), &cache);
        const double m = logits.maxCoeff();
        const Eigen::VectorXd shifted = (logits.array() - m).matrix();
        const double log_z = std::log(shifted.array().exp().sum());
        const Eigen::VectorXd probs = (shifted.array() - log_z).exp().matrix();
        batch_loss += log_z - shifted[ds.labels[idx]];
        Eigen::VectorXd grad_logits = probs;
        grad_logits[ds.labels[idx]] -= 1.0;
        model.net.backward(cache, grad_logits, grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw divergence_error("baseline: loss became non-finite at epoch " +
                               std::to_string(epoch));
      }
      grads.scale(1.0 / static_cast<double>(batch.size()));
      optimizer.step(param_refs, grad_refs);
      epoch_loss += batch_loss;
    }
    trace.push_back({epoch, 0.0, epoch_loss / static_cast<double>(train_indices.size())});
  }
  return {std::move(model), std::move(trace)};
}

ExperimentReport evaluate(const TmcModel& model, const Normalizer& normalizer,
                          const MultiViewDataset& raw, const std::vector<int>& indices,
                          const std::optional<NoiseSpec>& noise, nlohmann::json config_echo) {
  raw.validate();
  if (indices.empty()) {
    throw std::invalid_argument("evaluate: no samples selected");
  }
  if (static_cast<int>(model.nets.size()) != raw.view_count()) {
    throw std::invalid_argument("evaluate: model has " + std::to_string(model.nets.size()) +
                                " views, dataset has " + std::to_string(raw.view_count()));
  }
  for (int v = 0; v < raw.view_count(); ++v) {
    if (model.nets[v].input_dim() != static_cast<int>(raw.views[v].cols())) {
      throw std::invalid_argument("evaluate: view " + std::to_string(v) +
                                  " feature dimension mismatch");
    }
  }

  std::vector<std::uint8_t> ood_mask;
  const MultiViewDataset eval_ds = prepare_eval_data(raw, normalizer, noise, indices, ood_mask);
  if (noise) config_echo["noise"] = noise_to_json(*noise);

  const int views = raw.view_count();
  std::vector<Eigen::VectorXd> evidences(views);
  std::vector<SampleRecord> records;
  records.reserve(indices.size());

  for (int idx : indices) {
    SampleRecord rec;
    rec.truth = eval_ds.labels[idx];
    rec.view_uncertainties.resize(views);
    for (int v = 0; v < views; ++v) {
      evidences[v] = model.nets[v].forward(eval_ds.views[v].row(idx).transpose());
      const auto [opinion, params] = opinion_from_evidence(evidences[v]);
      rec.view_uncertainties[v] = opinion.uncertainty();
    }
    auto [joint, tape] = fuse_forward(evidences);
    rec.scores = expected_probabilities(joint);
    rec.joint_uncertainty = tape.prefix.back().uncertainty();
    Eigen::Index argmax = 0;
    rec.scores.maxCoeff(&argmax);
    rec.predicted = static_cast<int>(argmax);
    rec.ood = ood_mask[idx] != 0;
    records.push_back(std::move(rec));
  }
  return ExperimentReport::from_records(std::move(config_echo), std::move(records),
                                        model.class_count);
}

double evaluate_baseline_accuracy(const BaselineModel& model, const Normalizer& normalizer,
                                  const MultiViewDataset& raw, const std::vector<int>& indices,
                                  const std::optional<NoiseSpec>& noise) {
  if (indices.empty()) {
    throw std::invalid_argument("evaluate_baseline_accuracy: no samples selected");
  }
  std::vector<std::uint8_t> mask;
  const MultiViewDataset eval_ds = prepare_eval_data(raw, normalizer, noise, indices, mask);
  const Eigen::MatrixXd features = eval_ds.concatenated();
  long correct = 0;
  for (int idx : indices) {
    const Eigen::VectorXd probs = model.probabilities(features.row(idx).transpose());
    Eigen::Index argmax = 0;
    probs.maxCoeff(&argmax);
    if (static_cast<int>(argmax) == eval_ds.labels[idx]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

std::vector<SweepRow> noise_sweep(const TmcModel& model, const BaselineModel* baseline,
                                  const Normalizer& normalizer, const MultiViewDataset& raw,
                                  const std::vector<int>& indices,
                                  const std::vector<double>& sigmas,
                                  const std::vector<int>& noise_views, double noise_fraction,
                                  std::uint64_t seed) {
  if (sigmas.empty()) {
    throw std::invalid_argument("noise_sweep: empty sigma list");
  }
  std::vector<SweepRow> rows;
  for (double sigma : sigmas) {
    NoiseSpec spec;
    spec.sigma = sigma;
    spec.affected_views = noise_views;
    spec.affected_fraction = noise_fraction;
    spec.seed = seed;

    SweepRow row;
    row.sigma = sigma;
    row.tmc_accuracy =
        evaluate(model, normalizer, raw, indices, spec, nlohmann::json::object()).accuracy;
    if (baseline) {
      row.baseline_accuracy =
          evaluate_baseline_accuracy(*baseline, normalizer, raw, indices, spec);
    }
    rows.push_back(row);
  }
  return rows;
}

TmcModel tmc_model_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.model_type != "tmc") {
    throw std::invalid_argument("checkpoint holds a '" + ckpt.model_type + "' model, not tmc");
  }
  TmcModel model;
  model.class_count = ckpt.class_count;
  for (const auto& layers : ckpt.view_layers) {
    const int input_dim = static_cast<int>(layers.front().weight.cols());
    Mlp mlp(input_dim, ckpt.hidden_dims, ckpt.class_count);
    mlp.layers() = layers;
    model.nets.emplace_back(std::move(mlp), ckpt.activation);
  }
  return model;
}

BaselineModel baseline_from_checkpoint(const Checkpoint& ckpt) {
  if (ckpt.model_type != "concat_softmax") {
    throw std::invalid_argument("checkpoint holds a '" + ckpt.model_type +
                                "' model, not concat_softmax");
  }
  const auto& layers = ckpt.view_layers.at(0);
  const int input_dim = static_cast<int>(layers.front().weight.cols());
  Mlp mlp(input_dim, ckpt.hidden_dims, ckpt.class_count);
  mlp.layers() = layers;
  return BaselineModel{std::move(mlp), ckpt.class_count};
}

namespace {

Checkpoint assemble_checkpoint(const TrainConfig& config, const MultiViewDataset& raw,
                               const Normalizer& norm, const SplitIndices& split,
                               std::string model_type,
                               std::vector<std::vector<LinearLayer>> view_layers) {
  Checkpoint ckpt;
  ckpt.seed = config.seed;
  ckpt.model_type = std::move(model_type);
  ckpt.config = config.to_json();
  ckpt.config["dataset"] = raw.name;
  ckpt.config["input_dims"] = raw.view_dims();
  ckpt.activation = config.activation;
  ckpt.hidden_dims = config.hidden_dims;
  ckpt.class_count = raw.class_count;
  ckpt.view_layers = std::move(view_layers);
  ckpt.normalizer = norm;
  ckpt.split = split;
  return ckpt;
}

}  // namespace

FitResult fit_tmc(const MultiViewDataset& raw, const TrainConfig& config) {
  const SplitIndices split = stratified_split(raw, config.test_fraction, config.seed);
  const Normalizer norm = Normalizer::fit(raw, split.train);
  const MultiViewDataset normalized = norm.transform(raw);
  auto [model, trace] = train(normalized, split.train, config);

  std::vector<std::vector<LinearLayer>> view_layers;
  for (const EvidentialNet& net : model.nets) view_layers.push_back(net.mlp().layers());
  return FitResult{
      assemble_checkpoint(config, raw, norm, split, "tmc", std::move(view_layers)),
      std::move(trace)};
}

FitResult fit_baseline(const MultiViewDataset& raw, const TrainConfig& config) {
  const SplitIndices split = stratified_split(raw, config.test_fraction, config.seed);
  const Normalizer norm = Normalizer::fit(raw, split.train);
  const MultiViewDataset normalized = norm.transform(raw);
  auto [model, trace] = baseline_concat_softmax(normalized, split.train, config);
  return FitResult{assemble_checkpoint(config, raw, norm, split, "concat_softmax",
                                       {model.net.layers()}),
                   std::move(trace)};
}

TuneResult tune_learning_rate(const MultiViewDataset& raw, const TrainConfig& config,
                              const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("tune_learning_rate: empty grid");
  }
  const SplitIndices split = stratified_split(raw, config.test_fraction, config.seed);

  // 5 folds over the training split, deterministic in the seed.
  std::vector<int> order = split.train;
  std::mt19937_64 rng = substream_rng(config.seed, "folds");
  std::shuffle(order.begin(), order.end(), rng);
  constexpr int kFolds = 5;

  TuneResult result;
  double best = -1.0;
  for (double rate : grid) {
    double mean_accuracy = 0.0;
    for (int fold = 0; fold < kFolds; ++fold) {
      std::vector<int> fold_train, fold_val;
      for (std::size_t i = 0; i < order.size(); ++i) {
        (static_cast<int>(i % kFolds) == fold ? fold_val : fold_train).push_back(order[i]);
      }
      TrainConfig fold_config = config;
      fold_config.learning_rate = rate;
      const Normalizer fold_norm = Normalizer::fit(raw, fold_train);
      auto [model, trace] = train(fold_norm.transform(raw), fold_train, fold_config);
      const ExperimentReport report =
          evaluate(model, fold_norm, raw, fold_val, std::nullopt, nlohmann::json::object());
      mean_accuracy += report.accuracy;
    }
    mean_accuracy /= kFolds;
    result.mean_accuracy_by_rate.emplace_back(rate, mean_accuracy);
    if (mean_accuracy > best) {
      best = mean_accuracy;
      result.chosen_learning_rate = rate;
    }
  }
  return result;
}

}  // namespace tmc
