#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "smp/graph.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

struct Record {
  Graph graph;
  int label = 0;               // cycles: 1 iff a k-cycle exists
  std::size_t source = 0;      // multitask: flagged node
  MultitaskTargets targets;    // multitask: raw (unstandardized) targets

  bool operator==(const Record&) const = default;
};

struct Dataset {
  std::string task;  // "cycles" or "multitask"
  std::size_t k = 0;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Record> records;

  bool operator==(const Dataset&) const = default;
};

/// Balanced: ceil(count/2) positives, floor(count/2) negatives. Records come
/// in pairs with the same edge count; positives get a k-cycle planted when
/// the random draw has none, negatives are redrawn until they have none.
Dataset generate_cycle_dataset(std::size_t k, std::size_t n, std::size_t count,
                               std::uint64_t seed);

/// Half Erdos-Renyi graphs (p uniform in [0.15, 0.5]), half random trees with
/// 0-3 extra edges. Node features: [is_source, N(0,1) signal].
Dataset generate_multitask_dataset(std::size_t count, std::size_t n_min, std::size_t n_max,
                                   std::uint64_t seed);

/// JSON-lines records at `path`, generation metadata at `path + ".meta.json"`.
void write_dataset(const std::string& path, const Dataset& ds);
/// Throws ParseError with the offending line number. A missing metadata file
/// is tolerated; the task is then inferred from the labels.
Dataset read_dataset(const std::string& path);

/// Recomputes every label with the graph oracles; returns a description of
/// the first mismatch.
std::optional<std::string> check_labels(const Dataset& ds);

nlohmann::json record_label(const Dataset& ds, const Record& r);

}  // namespace smp
