#include <algorithm>

#include "smp/errors.hpp"
#include "smp/graph_algorithms.hpp"

namespace smp {

namespace {

void check_length(const Graph& g, std::size_t k) {
  if (k < 3 || k > g.n()) {
    throw ArgumentError("cycle length " + std::to_string(k) + " outside [3, " +
                        std::to_string(g.n()) + "]");
  }
}

// Paths grow from their smallest vertex `start` through strictly larger
// vertices; closing back to `start` with path[1] < path.back() keeps exactly
// one of the two traversal directions.
template <typename Visit>
bool extend(const Graph& g, std::size_t k, std::vector<std::size_t>& path,
            std::vector<char>& on_path, Visit& visit) {
  const std::size_t start = path.front();
  const std::size_t last = path.back();
  if (path.size() == k) {
    if (path[1] < last && g.has_edge(last, start)) return visit(path);
    return false;
  }
  for (auto next : g.neighbors()[last]) {
    if (next <= start || on_path[next]) continue;
    path.push_back(next);
    on_path[next] = 1;
    const bool stop = extend(g, k, path, on_path, visit);
    on_path[next] = 0;
    path.pop_back();
    if (stop) return true;
  }
  return false;
}

// `visit` returns true to stop early.
template <typename Visit>
void for_each_cycle(const Graph& g, std::size_t k, Visit visit) {
  check_length(g, k);
  std::vector<std::size_t> path;
  std::vector<char> on_path(g.n(), 0);
  for (std::size_t s = 0; s < g.n(); ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    const bool stop = extend(g, k, path, on_path, visit);
    on_path[s] = 0;
    if (stop) return;
  }
}

}  // namespace

std::uint64_t count_k_cycles(const Graph& g, std::size_t k) {
  std::uint64_t count = 0;
  for_each_cycle(g, k, [&](const std::vector<std::size_t>&) {
    ++count;
    return false;
  });
  return count;
}

bool has_k_cycle(const Graph& g, std::size_t k) {
  bool found = false;
  for_each_cycle(g, k, [&](const std::vector<std::size_t>&) {
    found = true;
    return true;
  });
  return found;
}

std::vector<std::vector<std::size_t>> enumerate_k_cycles(const Graph& g, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for_each_cycle(g, k, [&](const std::vector<std::size_t>& path) {
    out.push_back(path);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace smp
