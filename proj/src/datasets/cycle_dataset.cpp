#include <algorithm>
#include <random>

#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/params.hpp"

namespace smp {

namespace {

constexpr std::size_t kMaxSalts = 20;
constexpr std::size_t kMaxRedraws = 200;
constexpr std::size_t kMaxRejections = 2000;

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

EdgeList all_pairs(std::size_t n) {
  EdgeList pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

Graph random_gnm(std::size_t n, std::size_t m, Rng& rng) {
  auto pairs = all_pairs(n);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(m);
  return Graph(n, pairs);
}

// Edge count shared by both records of a pair.
std::size_t pair_edge_count(std::size_t n, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t pairs = n * (n - 1) / 2;
  std::binomial_distribution<std::size_t> draw(pairs, std::min(1.0, 1.2 / static_cast<double>(n - 1)));
  for (std::size_t t = 0; t < kMaxRedraws; ++t) {
    const std::size_t m = draw(rng);
    if (m >= k) return m;
  }
  // Very small n: fall back to the smallest edge count that allows a k-cycle.
  return k;
}

Graph plant_cycle(const Graph& g, std::size_t k, std::size_t m, Rng& rng) {
  const std::size_t n = g.n();
  std::vector<std::size_t> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = i;
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(k);
  EdgeList cycle;
  for (std::size_t t = 0; t < k; ++t) {
    auto a = nodes[t], b = nodes[(t + 1) % k];
    cycle.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(cycle.begin(), cycle.end());
  EdgeList others;
  for (const auto& e : g.edges()) {
    std::pair<std::size_t, std::size_t> p{e.u, e.v};
    if (!std::binary_search(cycle.begin(), cycle.end(), p)) others.push_back(p);
  }
  std::shuffle(others.begin(), others.end(), rng);
  others.resize(std::min(others.size(), m - k));
  others.insert(others.end(), cycle.begin(), cycle.end());
  return Graph(n, others);
}

std::optional<Graph> positive_graph(std::size_t n, std::size_t k, std::size_t m, Rng& rng) {
  Graph g = random_gnm(n, m, rng);
  if (!has_k_cycle(g, k)) g = plant_cycle(g, k, m, rng);
  if (!has_k_cycle(g, k)) return std::nullopt;
  return g;
}

std::optional<Graph> negative_graph(std::size_t n, std::size_t k, std::size_t m, Rng& rng) {
  for (std::size_t t = 0; t < kMaxRejections; ++t) {
    Graph g = random_gnm(n, m, rng);
    if (!has_k_cycle(g, k)) return g;
  }
  return std::nullopt;
}

double mean_degree(const std::vector<Record>& records, int label) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.label != label) continue;
    total += r.graph.average_degree();
    ++count;
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

}  // namespace

Dataset generate_cycle_dataset(std::size_t k, std::size_t n, std::size_t count,
                               std::uint64_t seed) {
  if (k < 3) throw ArgumentError("cycle length must be at least 3");
  if (n < k) throw ArgumentError("graph size " + std::to_string(n) + " below cycle length " +
                                 std::to_string(k));
  Dataset ds;
  ds.task = "cycles";
  ds.k = k;
  ds.seed = seed;
  ds.config = {{"task", "cycles"}, {"k", k}, {"n", n}, {"count", count}, {"seed", seed}};

  double gap = 0.0;
  std::size_t made_pos = 0, made_neg = 0;
  for (std::size_t salt = 0; salt < kMaxSalts; ++salt) {
    const std::uint64_t base = seed + salt * 0x9E3779B97F4A7C15ULL;
    std::vector<Record> records(count);
    made_pos = made_neg = 0;
    bool ok = true;
    for (std::size_t idx = 0; idx < count && ok; idx += 2) {
      const bool with_negative = idx + 1 < count;
      bool done = false;
      for (std::size_t redraw = 0; redraw < kMaxRedraws && !done; ++redraw) {
        const std::size_t m = pair_edge_count(n, k, (base ^ idx) + redraw);
        Rng pos_rng(base ^ idx);
        Rng neg_rng(base ^ (idx + 1));
        pos_rng.discard(redraw);
        neg_rng.discard(redraw);
        auto pos = positive_graph(n, k, m, pos_rng);
        if (!pos) continue;
        std::optional<Graph> neg;
        if (with_negative) {
          neg = negative_graph(n, k, m, neg_rng);
          if (!neg) continue;
        }
        records[idx].graph = std::move(*pos);
        records[idx].label = 1;
        ++made_pos;
        if (with_negative) {
          records[idx + 1].graph = std::move(*neg);
          records[idx + 1].label = 0;
          ++made_neg;
        }
        done = true;
      }
      ok = done;
    }
    if (!ok) continue;
    // The density check needs both classes represented in earnest.
    if (made_pos >= 10 && made_neg >= 10) {
      const double dp = mean_degree(records, 1);
      const double dn = mean_degree(records, 0);
      gap = std::abs(dp - dn) / std::max(dp, dn);
      if (gap >= 0.05) continue;
    }
    ds.records = std::move(records);
    return ds;
  }
  const double achieved = made_pos + made_neg
                              ? static_cast<double>(made_pos) / static_cast<double>(made_pos + made_neg)
                              : 0.0;
  throw GenerationError("could not generate a balanced cycle dataset (k=" + std::to_string(k) +
                        ", n=" + std::to_string(n) + "): positive ratio " +
                        std::to_string(achieved) + " over " + std::to_string(made_pos + made_neg) +
                        " records, mean-degree gap " + std::to_string(gap));
}

}  // namespace smp
