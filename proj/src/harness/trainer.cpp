#include "smp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "smp/adam.hpp"
#include "smp/checkpoint.hpp"
#include "smp/errors.hpp"
#include "smp/ops.hpp"

namespace smp {

using nlohmann::json;

namespace {

// Tape intermediates on large contexts are a few hundred KB each. Above
// glibc's default mmap threshold every one of them is a fresh mapping whose
// pages the kernel must fault in and zero; keeping them on the heap lets
// freed blocks be reused across steps.
void keep_large_blocks_on_heap() {
#if defined(__GLIBC__)
  static const bool done = [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)done;
#endif
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Raw targets of one record: three node columns, three graph values.
void raw_targets(const Record& r, std::vector<double>& node, std::array<double, 3>& graph) {
  const std::size_t n = r.graph.n();
  node.resize(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    node[3 * i] = r.targets.dist[i];
    node[3 * i + 1] = r.targets.ecc[i];
    node[3 * i + 2] = r.targets.lap[i];
  }
  graph = {r.targets.connected ? 1.0 : 0.0, r.targets.diameter, r.targets.radius};
}

struct Targets {
  Tensor node;
  Tensor graph;
};

Targets standardized_targets(const Record& r, const Standardizer& s) {
  std::vector<double> node;
  std::array<double, 3> graph{};
  raw_targets(r, node, graph);
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::size_t t = i % 3;
    node[i] = (node[i] - s.mean[t]) / s.stddev[t];
  }
  std::vector<double> g(3);
  for (std::size_t t = 0; t < 3; ++t) g[t] = (graph[t] - s.mean[3 + t]) / s.stddev[3 + t];
  return {Tensor({r.graph.n(), 3}, std::move(node)), Tensor({1, 3}, std::move(g))};
}

Tensor record_loss(const Model::Output& out, const Record& r, const std::string& task,
                   const Standardizer& s) {
  if (task == "cycles") {
    const double label = r.label;
    return bce_with_logits(out.graph, std::span<const double>(&label, 1));
  }
  const auto t = standardized_targets(r, s);
  // Sum over targets of the per-target mean squared error.
  return add(scale(mse(out.node, t.node), 3.0), scale(mse(out.graph, t.graph), 3.0));
}

std::vector<std::vector<double>> snapshot(const ParamList& params) {
  std::vector<std::vector<double>> out;
  for (const auto& p : params) {
    auto v = p.tensor.values();
    out.emplace_back(v.begin(), v.end());
  }
  return out;
}

void restore(ParamList& params, const std::vector<std::vector<double>>& values) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto dst = params[k].tensor.mutable_values();
    std::copy(values[k].begin(), values[k].end(), dst.begin());
  }
}

std::vector<const Record*> pointers(const Dataset& ds) {
  std::vector<const Record*> out;
  for (const auto& r : ds.records) out.push_back(&r);
  return out;
}

void require_task(const Dataset& ds, const std::string& task, const std::string& what) {
  if (ds.records.empty()) throw ConfigError(what + " dataset is empty");
  if (ds.task != task) {
    throw ConfigError(what + " dataset holds task '" + ds.task + "', run expects '" + task + "'");
  }
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<const Record*>& records) {
  Standardizer s;
  std::array<double, 6> sum{}, sq{};
  std::array<std::size_t, 6> count{};
  std::vector<double> node;
  std::array<double, 3> graph{};
  for (const Record* r : records) {
    raw_targets(*r, node, graph);
    for (std::size_t i = 0; i < node.size(); ++i) {
      sum[i % 3] += node[i];
      sq[i % 3] += node[i] * node[i];
      ++count[i % 3];
    }
    for (std::size_t t = 0; t < 3; ++t) {
      sum[3 + t] += graph[t];
      sq[3 + t] += graph[t] * graph[t];
      ++count[3 + t];
    }
  }
  for (std::size_t t = 0; t < 6; ++t) {
    if (count[t] == 0) continue;
    const double c = static_cast<double>(count[t]);
    s.mean[t] = sum[t] / c;
    const double var = std::max(0.0, sq[t] / c - s.mean[t] * s.mean[t]);
    s.stddev[t] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }
  return s;
}

std::vector<std::pair<std::string, std::string>> Standardizer::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t t = 0; t < 6; ++t) {
    out.emplace_back(std::string("std.mean.") + kTargetNames[t], format_double(mean[t]));
    out.emplace_back(std::string("std.sd.") + kTargetNames[t], format_double(stddev[t]));
  }
  return out;
}

Standardizer Standardizer::from_entries(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  std::map<std::string, std::string> m(kv.begin(), kv.end());
  Standardizer s;
  for (std::size_t t = 0; t < 6; ++t) {
    auto mean_it = m.find(std::string("std.mean.") + kTargetNames[t]);
    auto sd_it = m.find(std::string("std.sd.") + kTargetNames[t]);
    if (mean_it == m.end() || sd_it == m.end()) continue;
    s.mean[t] = std::stod(mean_it->second);
    s.stddev[t] = std::stod(sd_it->second);
  }
  return s;
}

json SplitMetrics::to_json(const std::string& task) const {
  json j = {{"graphs", graphs}, {"loss", loss}};
  if (task == "cycles") {
    j["accuracy"] = accuracy;
  } else {
    json per = json::object();
    json raw = json::object();
    for (std::size_t t = 0; t < 6; ++t) {
      per[kTargetNames[t]] = log10_mse[t];
      raw[kTargetNames[t]] = mse[t];
    }
    j["log10_mse"] = per;
    j["mse"] = raw;
    j["mean_log10_mse"] = mean_log10_mse;
    j["subset_log10_mse"] = subset_log10_mse;
  }
  return j;
}

json MetricsReport::to_json() const {
  return {{"task", task},
          {"model", model},
          {"seed", seed},
          {"config_hash", config_hash},
          {"epochs_run", epochs_run},
          {"best_epoch", best_epoch},
          {"wall_seconds", wall_seconds},
          {"train_loss", train_loss},
          {"val_loss", val_loss},
          {"test", test.to_json(task)},
          {"checkpoint", checkpoint}};
}

SplitMetrics evaluate_model(const Model& model, const std::vector<const Record*>& records,
                            const std::string& task, const Standardizer& standardizer) {
  if (records.empty()) throw ConfigError("cannot evaluate on an empty dataset");
  NoGradGuard no_grad;
  SplitMetrics m;
  m.graphs = records.size();
  std::size_t correct = 0;
  std::array<double, 6> sq{};
  std::size_t nodes = 0;
  for (const Record* r : records) {
    const auto out = model.forward(r->graph);
    m.loss += record_loss(out, *r, task, standardizer).item();
    if (task == "cycles") {
      const bool predicted = out.graph.item() > 0.0;
      if (predicted == (r->label == 1)) ++correct;
      continue;
    }
    const auto t = standardized_targets(*r, standardizer);
    auto pv = out.node.values();
    auto tv = t.node.values();
    for (std::size_t i = 0; i < pv.size(); ++i) sq[i % 3] += (pv[i] - tv[i]) * (pv[i] - tv[i]);
    nodes += r->graph.n();
    for (std::size_t k = 0; k < 3; ++k) {
      const double d = out.graph.values()[k] - t.graph.values()[k];
      sq[3 + k] += d * d;
    }
  }
  const double count = static_cast<double>(records.size());
  m.loss /= count;
  if (task == "cycles") {
    m.accuracy = static_cast<double>(correct) / count;
    return m;
  }
  for (std::size_t t = 0; t < 6; ++t) {
    m.mse[t] = sq[t] / (t < 3 ? static_cast<double>(nodes) : count);
    m.log10_mse[t] = std::log10(std::max(m.mse[t], 1e-300));
  }
  m.mean_log10_mse =
      std::accumulate(m.log10_mse.begin(), m.log10_mse.end(), 0.0) / 6.0;
  m.subset_log10_mse = (m.log10_mse[0] + m.log10_mse[1] + m.log10_mse[4]) / 3.0;
  return m;
}

MetricsReport train(const RunConfig& cfg) {
  cfg.validate(true);
  keep_large_blocks_on_heap();
  const auto started = std::chrono::steady_clock::now();
  const Dataset train_ds = read_dataset(cfg.train);
  const Dataset test_ds = read_dataset(cfg.test);
  require_task(train_ds, cfg.task, "train");
  require_task(test_ds, cfg.task, "test");

  // Hold out a validation slice of the training set.
  auto all = pointers(train_ds);
  Rng split_rng(cfg.seed ^ 0x76616c6964ULL);
  std::shuffle(all.begin(), all.end(), split_rng);
  std::size_t n_val = static_cast<std::size_t>(std::llround(cfg.val_fraction * all.size()));
  if (cfg.val_fraction > 0.0 && n_val == 0 && all.size() > 1) n_val = 1;
  std::vector<const Record*> val(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<const Record*> fit(all.begin() + static_cast<std::ptrdiff_t>(n_val), all.end());
  const auto test = pointers(test_ds);

  const Standardizer standardizer =
      cfg.task == "multitask" ? Standardizer::fit(fit) : Standardizer{};

  const Graph& sample = fit.front()->graph;
  ModelSpec spec;
  spec.task = cfg.task;
  spec.variant = cfg.model;
  spec.layers = cfg.layers;
  spec.width = cfg.width;
  spec.hidden_layers = cfg.hidden_layers;
  spec.head_width = cfg.effective_head_width();
  spec.c_in = 1 + sample.node_feature_dim();
  spec.c_edge = sample.edge_feature_dim();
  spec.coloring = cfg.coloring;
  spec.norm = cfg.norm;
  Rng init_rng(cfg.seed);
  Model model(spec, init_rng);
  ParamList params = model.params();

  AdamState adam(AdamConfig{cfg.lr, cfg.beta1, cfg.beta2, cfg.eps});
  Rng order_rng(cfg.seed ^ 0x6f72646572ULL);

  std::filesystem::create_directories(cfg.out);
  std::ofstream csv(std::filesystem::path(cfg.out) / "metrics.csv");
  csv.precision(17);
  csv << "epoch,split,metric,value\n";

  MetricsReport report;
  report.task = cfg.task;
  report.model = cfg.model;
  report.seed = cfg.seed;
  report.config_hash = cfg.hash();

  double best_val = std::numeric_limits<double>::infinity();
  auto best_values = snapshot(params);
  std::size_t since_best = 0;
  std::size_t since_change = 0;
  std::size_t step = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(fit.begin(), fit.end(), order_rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < fit.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(fit.size(), start + cfg.batch_size);
      const double weight = 1.0 / static_cast<double>(end - start);
      zero_grads(params);
      for (std::size_t b = start; b < end; ++b) {
        const Record& r = *fit[b];
        const Tensor loss = record_loss(model.forward(r.graph), r, cfg.task, standardizer);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                              std::to_string(step));
        }
        epoch_loss += value;
        backprop(scale(loss, weight));
      }
      adam_update(params, adam);
      ++step;
    }
    zero_grads(params);
    epoch_loss /= static_cast<double>(fit.size());
    report.train_loss.push_back(epoch_loss);
    csv << epoch << ",train,loss," << epoch_loss << '\n';

    double val_loss = epoch_loss;
    if (!val.empty()) {
      const auto vm = evaluate_model(model, val, cfg.task, standardizer);
      val_loss = vm.loss;
      csv << epoch << ",val,loss," << vm.loss << '\n';
      if (cfg.task == "cycles") {
        csv << epoch << ",val,accuracy," << vm.accuracy << '\n';
      } else {
        csv << epoch << ",val,mean_log10_mse," << vm.mean_log10_mse << '\n';
      }
    }
    report.val_loss.push_back(val_loss);
    report.epochs_run = epoch;

    if (val_loss < best_val) {
      best_val = val_loss;
      best_values = snapshot(params);
      report.best_epoch = epoch;
      since_best = 0;
      since_change = 0;
    } else {
      ++since_best;
      ++since_change;
    }
    if (since_change >= cfg.lr_patience && adam.config.lr > cfg.min_lr) {
      adam.config.lr = std::max(cfg.min_lr, adam.config.lr * cfg.lr_factor);
      since_change = 0;
      csv << epoch << ",train,lr," << adam.config.lr << '\n';
    }
    if (since_best >= cfg.patience) break;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (cfg.max_seconds > 0.0 && elapsed >= cfg.max_seconds) break;
  }

  restore(params, best_values);
  report.test = evaluate_model(model, test, cfg.task, standardizer);
  csv << report.best_epoch << ",test,loss," << report.test.loss << '\n';
  if (cfg.task == "cycles") {
    csv << report.best_epoch << ",test,accuracy," << report.test.accuracy << '\n';
  } else {
    for (std::size_t t = 0; t < 6; ++t) {
      csv << report.best_epoch << ",test,log10_mse_" << kTargetNames[t] << ','
          << report.test.log10_mse[t] << '\n';
    }
    csv << report.best_epoch << ",test,mean_log10_mse," << report.test.mean_log10_mse << '\n';
    csv << report.best_epoch << ",test,subset_log10_mse," << report.test.subset_log10_mse << '\n';
  }

  std::vector<std::pair<std::string, std::string>> meta;
  for (const auto& [k, v] : cfg.entries()) meta.emplace_back("config." + k, v);
  for (const auto& kv : spec.entries()) meta.push_back(kv);
  for (const auto& kv : standardizer.entries()) meta.push_back(kv);
  meta.emplace_back("best_epoch", std::to_string(report.best_epoch));
  meta.emplace_back("config_hash", report.config_hash);
  const auto ckpt_path = std::filesystem::path(cfg.out) / "model.ckpt";
  write_checkpoint(ckpt_path, meta, params);
  report.checkpoint = ckpt_path.string();

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ofstream(std::filesystem::path(cfg.out) / "report.json") << report.to_json().dump(2)
                                                                << '\n';
  return report;
}

MetricsReport evaluate(const std::string& checkpoint_path, const std::string& dataset_path) {
  keep_large_blocks_on_heap();
  const auto started = std::chrono::steady_clock::now();
  const Checkpoint ckpt = read_checkpoint(checkpoint_path);
  const ModelSpec spec = ModelSpec::from_entries(ckpt.meta);
  const Standardizer standardizer = Standardizer::from_entries(ckpt.meta);
  const Dataset ds = read_dataset(dataset_path);
  if (ds.records.empty()) throw ConfigError("dataset " + dataset_path + " is empty");
  if (ds.task != spec.task) {
    throw CheckpointError("checkpoint was trained for task '" + spec.task + "', dataset is '" +
                          ds.task + "'");
  }
  for (const auto& r : ds.records) {
    if (1 + r.graph.node_feature_dim() != spec.c_in || r.graph.edge_feature_dim() != spec.c_edge) {
      throw CheckpointError("dataset feature widths (" + std::to_string(r.graph.node_feature_dim()) +
                            " node, " + std::to_string(r.graph.edge_feature_dim()) +
                            " edge) do not match the checkpoint (" +
                            std::to_string(spec.c_in - 1) + ", " + std::to_string(spec.c_edge) +
                            ")");
    }
  }
  Rng rng(0);
  Model model(spec, rng);
  ParamList params = model.params();
  load_parameters(ckpt, params);

  MetricsReport report;
  report.task = spec.task;
  report.model = spec.variant;
  const auto seed = ckpt.meta_value("config.seed");
  report.seed = seed.empty() ? 0 : std::stoull(seed);
  report.config_hash = ckpt.meta_value("config_hash");
  const auto best = ckpt.meta_value("best_epoch");
  report.best_epoch = best.empty() ? 0 : std::stoull(best);
  report.test = evaluate_model(model, pointers(ds), spec.task, standardizer);
  report.checkpoint = checkpoint_path;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace smp
