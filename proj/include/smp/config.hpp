#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace smp {

/// Training/evaluation settings. The file format is one `key = value` per
/// line, `#` starts a comment; keys are the field names below (dashes and
/// underscores are interchangeable).
struct RunConfig {
  std::string task = "cycles";     // cycles | multitask
  std::string model = "smp-fast";  // smp-fast | smp-default | mpnn
  std::size_t layers = 4;
  std::size_t width = 16;
  std::size_t hidden_layers = 1;   // per message/update MLP; 1 = two-layer perceptron
  std::size_t head_width = 0;      // 0: same as width
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t batch_size = 16;
  std::size_t epochs = 100;
  std::size_t patience = 50;       // epochs without validation improvement
  std::size_t lr_patience = 20;
  double lr_factor = 0.5;
  double min_lr = 1e-5;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
  std::string train;               // dataset paths
  std::string test;
  std::string out = "run";
  std::size_t coloring = 0;        // L for colored contexts, 0 = one-hot
  std::string norm = "graph";      // between-layer normalization: graph | none
  double max_seconds = 0.0;        // wall-clock cap on training, 0 = none

  /// Throws ConfigError on an unknown key or unparsable value.
  void set(const std::string& key, const std::string& value);
  static RunConfig from_file(const std::string& path);
  /// Range checks; with `need_files`, also that the dataset paths exist.
  void validate(bool need_files) const;
  std::size_t effective_head_width() const { return head_width ? head_width : width; }
  /// Every key with its value, in declaration order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  /// Stable 64-bit FNV-1a over entries(), as hex.
  std::string hash() const;
};

}  // namespace smp
