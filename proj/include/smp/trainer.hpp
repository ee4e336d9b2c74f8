#pragma once

#include <array>
#include <cstddef>
#include <json.hpp>
#include <string>
#include <vector>

#include "smp/config.hpp"
#include "smp/datasets.hpp"
#include "smp/model.hpp"

namespace smp {

inline constexpr std::array<const char*, 6> kTargetNames = {"dist",      "ecc",      "lap",
                                                            "connected", "diameter", "radius"};

/// Per-target mean and standard deviation from the training split. Node
/// targets (dist, ecc, lap) pool over nodes, graph targets over graphs.
struct Standardizer {
  std::array<double, 6> mean{};
  std::array<double, 6> stddev{1, 1, 1, 1, 1, 1};

  static Standardizer fit(const std::vector<const Record*>& records);
  std::vector<std::pair<std::string, std::string>> entries() const;
  static Standardizer from_entries(const std::vector<std::pair<std::string, std::string>>& kv);
};

struct SplitMetrics {
  std::size_t graphs = 0;
  double loss = 0.0;
  double accuracy = 0.0;             // cycles
  std::array<double, 6> mse{};       // multitask, standardized targets
  std::array<double, 6> log10_mse{};
  double mean_log10_mse = 0.0;
  double subset_log10_mse = 0.0;     // dist, ecc, diameter

  nlohmann::json to_json(const std::string& task) const;
};

struct MetricsReport {
  std::string task;
  std::string model;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double wall_seconds = 0.0;
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;
  SplitMetrics test;
  std::string checkpoint;

  nlohmann::json to_json() const;
};

/// Inference on every record; no gradients recorded.
SplitMetrics evaluate_model(const Model& model, const std::vector<const Record*>& records,
                            const std::string& task, const Standardizer& standardizer);

/// Full run: writes <out>/metrics.csv, <out>/report.json and <out>/model.ckpt.
MetricsReport train(const RunConfig& cfg);

/// Loads a checkpoint written by train() and scores `dataset_path`. Writes
/// nothing.
MetricsReport evaluate(const std::string& checkpoint_path, const std::string& dataset_path);

}  // namespace smp
