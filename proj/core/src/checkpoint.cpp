#include "tmc/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace tmc {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error("checkpoint: ragged weight matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const std::vector<double> v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json Checkpoint::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["config"] = config;
  j["config"]["model_type"] = model_type;
  j["config"]["evidence_activation"] = to_string(activation);
  j["config"]["hidden_dims"] = hidden_dims;
  j["config"]["class_count"] = class_count;

  nlohmann::json views = nlohmann::json::array();
  for (const auto& layers : view_layers) {
    nlohmann::json layer_list = nlohmann::json::array();
    for (const LinearLayer& layer : layers) {
      layer_list.push_back(
          {{"weight", matrix_to_json(layer.weight)}, {"bias", vector_to_json(layer.bias)}});
    }
    views.push_back({{"layers", std::move(layer_list)}});
  }
  j["views"] = std::move(views);

  nlohmann::json norm;
  norm["mean"] = nlohmann::json::array();
  norm["scale"] = nlohmann::json::array();
  for (std::size_t v = 0; v < normalizer.mean.size(); ++v) {
    norm["mean"].push_back(vector_to_json(normalizer.mean[v]));
    norm["scale"].push_back(vector_to_json(normalizer.scale[v]));
  }
  j["normalizer"] = std::move(norm);

  j["split"] = {{"train_indices", split.train},
                {"test_indices", split.test},
                {"stratified", split.stratified}};
  return j;
}

Checkpoint Checkpoint::from_json(const nlohmann::json& j) {
  Checkpoint ckpt;
  ckpt.schema_version = j.at("schema_version").get<int>();
  if (ckpt.schema_version != 1) {
    throw std::runtime_error("checkpoint: unsupported schema_version " +
                             std::to_string(ckpt.schema_version));
  }
  ckpt.seed = j.at("seed").get<std::uint64_t>();
  ckpt.config = j.at("config");
  ckpt.model_type = ckpt.config.at("model_type").get<std::string>();
  ckpt.activation =
      evidence_activation_from_string(ckpt.config.at("evidence_activation").get<std::string>());
  ckpt.hidden_dims = ckpt.config.at("hidden_dims").get<std::vector<int>>();
  ckpt.class_count = ckpt.config.at("class_count").get<int>();

  for (const auto& view : j.at("views")) {
    std::vector<LinearLayer> layers;
    for (const auto& layer : view.at("layers")) {
      layers.push_back({matrix_from_json(layer.at("weight")), vector_from_json(layer.at("bias"))});
    }
    ckpt.view_layers.push_back(std::move(layers));
  }

  const nlohmann::json& norm = j.at("normalizer");
  for (const auto& v : norm.at("mean")) ckpt.normalizer.mean.push_back(vector_from_json(v));
  for (const auto& v : norm.at("scale")) ckpt.normalizer.scale.push_back(vector_from_json(v));

  const nlohmann::json& split = j.at("split");
  ckpt.split.train = split.at("train_indices").get<std::vector<int>>();
  ckpt.split.test = split.at("test_indices").get<std::vector<int>>();
  ckpt.split.stratified = split.at("stratified").get<bool>();
  return ckpt;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << to_json().dump(2) << '\n';
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace tmc
