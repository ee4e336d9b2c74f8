#include "smp/model.hpp"

#include <map>

#include "smp/coloring.hpp"
#include "smp/errors.hpp"
#include "smp/ops.hpp"

namespace smp {

namespace {

// Between layers: standardizes every channel over all rows of one graph's
// tensor, then applies a learned per-channel scale and shift. The statistics
// are invariant to node relabelling, so equivariance is kept. Not applied
// after the last layer, where a zero-mean channel would make sum readouts
// constant.
Tensor normalize(const Tensor& x, const std::pair<Tensor, Tensor>& gb) {
  return add_bias(mul(standardize_columns(x), repeat_rows(gb.first, x.rows())), gb.second);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ModelSpec::entries() const {
  return {{"model.task", task},
          {"model.variant", variant},
          {"model.layers", std::to_string(layers)},
          {"model.width", std::to_string(width)},
          {"model.hidden_layers", std::to_string(hidden_layers)},
          {"model.head_width", std::to_string(head_width)},
          {"model.c_in", std::to_string(c_in)},
          {"model.c_edge", std::to_string(c_edge)},
          {"model.coloring", std::to_string(coloring)},
          {"model.norm", norm}};
}

ModelSpec ModelSpec::from_entries(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::map<std::string, std::string> m(kv.begin(), kv.end());
  auto get = [&](const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw CheckpointError("checkpoint lacks model key " + key);
    return it->second;
  };
  auto size = [&](const std::string& key) {
    try {
      return static_cast<std::size_t>(std::stoull(get(key)));
    } catch (const std::logic_error&) {
      throw CheckpointError("checkpoint has a bad value for " + key);
    }
  };
  ModelSpec s;
  s.task = get("model.task");
  s.variant = get("model.variant");
  s.layers = size("model.layers");
  s.width = size("model.width");
  s.hidden_layers = size("model.hidden_layers");
  s.head_width = size("model.head_width");
  s.c_in = size("model.c_in");
  s.c_edge = size("model.c_edge");
  s.coloring = size("model.coloring");
  s.norm = get("model.norm");
  return s;
}

Model::Model(ModelSpec spec, Rng& rng) : spec_(std::move(spec)) {
  if (spec_.task != "cycles" && spec_.task != "multitask") {
    throw ConfigError("unknown task '" + spec_.task + "'");
  }
  if (spec_.norm != "graph" && spec_.norm != "none") throw ConfigError("unknown norm '" + spec_.norm + "'");
  std::size_t c = spec_.c_in;
  for (std::size_t l = 0; l < spec_.layers; ++l) {
    if (spec_.variant == "smp-fast") {
      smp_.push_back(SmpLayerParams::fast(c, spec_.width, rng));
    } else if (spec_.variant == "smp-default") {
      smp_.push_back(SmpLayerParams::make_default(c, spec_.width, spec_.c_edge,
                                                  spec_.hidden_layers, rng));
    } else if (spec_.variant == "mpnn") {
      mpnn_.push_back(MpnnLayerParams::init(c, spec_.width, spec_.c_edge, spec_.hidden_layers, rng));
    } else {
      throw ConfigError("unknown model '" + spec_.variant + "'");
    }
    c = spec_.width;
    if (spec_.norm == "graph" && l + 1 < spec_.layers) norms_.emplace_back(Tensor::full({1, c}, 1.0, true), Tensor::zeros({c}, true));
  }
  const std::size_t hw = spec_.head_width;
  if (spec_.task == "multitask") {
    for (std::size_t l = 0; l < spec_.layers; ++l) {
      extractors_.push_back(NodePoolParams::init(spec_.width, hw, hw, rng));
    }
    const std::size_t features = spec_.layers * hw;
    node_head_ = MlpParams::init(mlp_dims(features, hw, 1, 3), rng);
    graph_head_ = MlpParams::init(mlp_dims(2 * features, hw, 1, 3), rng);
  } else {
    graph_head_ = MlpParams::init(mlp_dims(2 * c, hw, 1, 1), rng);
  }
}

ParamList Model::params() const {
  ParamList out;
  for (std::size_t l = 0; l < smp_.size(); ++l) smp_[l].collect("layer" + std::to_string(l), out);
  for (std::size_t l = 0; l < mpnn_.size(); ++l) mpnn_[l].collect("layer" + std::to_string(l), out);
  for (std::size_t l = 0; l < norms_.size(); ++l) {
    out.push_back({"layer" + std::to_string(l) + ".norm.gamma", norms_[l].first});
    out.push_back({"layer" + std::to_string(l) + ".norm.beta", norms_[l].second});
  }
  for (std::size_t l = 0; l < extractors_.size(); ++l) {
    extractors_[l].collect("layer" + std::to_string(l) + ".extract", out);
  }
  if (spec_.task == "multitask") node_head_.collect("node_head", out);
  graph_head_.collect("graph_head", out);
  return out;
}

Model::Output Model::forward(const Graph& g) const {
  if (1 + g.node_feature_dim() != spec_.c_in) {
    throw DimensionError("graph has " + std::to_string(g.node_feature_dim()) +
                         " node features, model expects " + std::to_string(spec_.c_in - 1));
  }
  // Node features are read from each layer before it is normalized, so
  // graph-level scale survives into the multitask heads.
  std::vector<Tensor> features;
  auto extract = [&](const LocalContext& ctx, std::size_t l) {
    if (!extractors_.empty()) features.push_back(node_pool(ctx, extractors_[l]));
  };
  LocalContext u;
  if (!mpnn_.empty()) {
    Tensor x = init_node_states(g);
    for (std::size_t l = 0; l < mpnn_.size(); ++l) {
      x = mpnn_layer(x, g, mpnn_[l]);
      extract(node_vectors(x), l);
      if (l < norms_.size()) x = normalize(x, norms_[l]);
    }
    u = node_vectors(std::move(x));
  } else {
    u = spec_.coloring > 0 ? init_colored_context(g, color_nodes(g, spec_.coloring))
                           : init_local_context(g);
    for (std::size_t l = 0; l < smp_.size(); ++l) {
      u = smp_layer(u, g, smp_[l]);
      extract(u, l);
      if (l < norms_.size()) u = u.with_data(normalize(u.data, norms_[l]));
    }
  }
  Output out;
  if (spec_.task != "multitask") {
    out.graph = graph_extract(u, graph_head_);
    return out;
  }
  const Tensor h = concat_cols(features);
  out.node = mlp_forward(h, node_head_);
  const Tensor pooled[] = {block_mean(h, h.rows()), block_max(h, h.rows())};
  out.graph = mlp_forward(concat_cols(pooled), graph_head_);
  return out;
}

}  // namespace smp
