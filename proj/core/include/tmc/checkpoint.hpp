#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmc/dataset.hpp"
#include "tmc/network.hpp"

namespace tmc {

/// Single-document JSON checkpoint:
///   {"schema_version":1, "seed":..., "config":{...},
///    "views":[{"layers":[{"weight":[[...]],"bias":[...]}...]}...],
///    "normalizer":{...}, "split":{...}}
/// Numbers are written with shortest round-trip precision, so save/load is
/// weight-exact. model_type is "tmc" (one entry in views per data view,
/// evidence head) or "concat_softmax" (a single net over concatenated
/// features with a linear head).
struct Checkpoint {
  int schema_version = 1;
  std::uint64_t seed = 0;
  std::string model_type = "tmc";
  nlohmann::json config;
  EvidenceActivation activation = EvidenceActivation::rectifier;
  std::vector<std::vector<LinearLayer>> view_layers;
  std::vector<int> hidden_dims;
  int class_count = 0;
  Normalizer normalizer;
  SplitIndices split;

  nlohmann::json to_json() const;
  static Checkpoint from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
};

}  // namespace tmc
