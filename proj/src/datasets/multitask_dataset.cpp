#include <algorithm>
#include <random>

#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/params.hpp"

namespace smp {

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

EdgeList erdos_renyi(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> density(0.15, 0.5);
  const double p = density(rng);
  std::bernoulli_distribution coin(p);
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return edges;
}

// Random recursive tree on a shuffled labelling, plus up to three chords.
EdgeList tree_plus_edges(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  EdgeList edges;
  for (std::size_t t = 1; t < n; ++t) {
    std::uniform_int_distribution<std::size_t> parent(0, t - 1);
    auto a = order[t], b = order[parent(rng)];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  EdgeList missing;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j)))
        missing.emplace_back(i, j);
  std::shuffle(missing.begin(), missing.end(), rng);
  std::uniform_int_distribution<std::size_t> extra(0, 3);
  const std::size_t add = std::min(extra(rng), missing.size());
  edges.insert(edges.end(), missing.begin(), missing.begin() + static_cast<std::ptrdiff_t>(add));
  return edges;
}

}  // namespace

Dataset generate_multitask_dataset(std::size_t count, std::size_t n_min, std::size_t n_max,
                                   std::uint64_t seed) {
  if (n_min < 3 || n_min > n_max) {
    throw ArgumentError("multitask sizes need 3 <= n_min <= n_max");
  }
  Dataset ds;
  ds.task = "multitask";
  ds.seed = seed;
  ds.config = {{"task", "multitask"}, {"count", count}, {"n_min", n_min},
               {"n_max", n_max},      {"seed", seed}};
  ds.records.resize(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Rng rng(seed ^ idx);
    std::uniform_int_distribution<std::size_t> size(n_min, n_max);
    const std::size_t n = size(rng);
    std::bernoulli_distribution use_tree(0.5);
    Graph g(n, use_tree(rng) ? tree_plus_edges(n, rng) : erdos_renyi(n, rng));

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t source = pick(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> signal(n), features(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      signal[i] = normal(rng);
      features[2 * i] = i == source ? 1.0 : 0.0;
      features[2 * i + 1] = signal[i];
    }
    g.set_node_features(2, std::move(features));
    Record& r = ds.records[idx];
    r.targets = multitask_targets(g, source, signal);
    r.source = source;
    r.graph = std::move(g);
  }
  return ds;
}

}  // namespace smp
