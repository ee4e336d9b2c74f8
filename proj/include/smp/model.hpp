#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "smp/graph.hpp"
#include "smp/layers.hpp"

namespace smp {

struct ModelSpec {
  std::string task;     // cycles | multitask
  std::string variant;  // smp-fast | smp-default | mpnn
  std::size_t layers = 1;
  std::size_t width = 16;
  std::size_t hidden_layers = 1;
  std::size_t head_width = 16;
  std::size_t c_in = 1;    // 1 + node feature width
  std::size_t c_edge = 0;  // edge feature width
  std::size_t coloring = 0;
  std::string norm = "graph";  // graph | none

  std::vector<std::pair<std::string, std::string>> entries() const;
  /// Inverse of entries(); throws CheckpointError on missing keys.
  static ModelSpec from_entries(const std::vector<std::pair<std::string, std::string>>& kv);
};

/// Stacked layers of one variant followed by the task heads.
/// cycles: graph_extract on the last layer, one logit.
/// multitask: a node_pool extractor after every layer; the per-layer node
/// features are concatenated, an MLP maps them to the 3 node targets, and
/// an MLP over their node mean and max gives the 3 graph targets.
class Model {
 public:
  struct Output {
    Tensor node;   // n x 3, multitask only
    Tensor graph;  // 1 x (1 | 3)
  };

  Model(ModelSpec spec, Rng& rng);

  const ModelSpec& spec() const { return spec_; }
  ParamList params() const;
  Output forward(const Graph& g) const;

 private:
  ModelSpec spec_;
  std::vector<SmpLayerParams> smp_;
  std::vector<MpnnLayerParams> mpnn_;
  // Between layers: per-graph channel standardization, then gamma/beta.
  std::vector<std::pair<Tensor, Tensor>> norms_;
  std::vector<NodePoolParams> extractors_;  // multitask only
  MlpParams node_head_;                     // multitask only
  MlpParams graph_head_;
};

}  // namespace smp
