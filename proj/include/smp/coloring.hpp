#pragma once

#include <cstddef>
#include <vector>

#include "smp/context.hpp"
#include "smp/graph.hpp"

namespace smp {

struct ColorAssignment {
  std::vector<std::size_t> colors;
  std::size_t chi = 0;
  std::size_t horizon = 0;  // L
};

/// Greedy coloring of the graph linking every pair at distance <= 2L, in
/// ascending node order with the lowest free color.
ColorAssignment color_nodes(const Graph& g, std::size_t horizon);
/// True when no two distinct nodes within distance 2L share a color and chi
/// matches the colors used.
bool is_valid_coloring(const Graph& g, const ColorAssignment& ca);
/// Contexts with chi rows; node j sits at row colors[j] in every context.
LocalContext init_colored_context(const Graph& g, const ColorAssignment& ca);

}  // namespace smp
