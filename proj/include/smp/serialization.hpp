#pragma once

#include <json.hpp>
#include <string>

#include "smp/graph.hpp"

namespace smp {

/// One JSON object per graph:
///   {"n": int, "edges": [[i,j],...], "x": [[f,...],...] | null,
///    "y": [[i,j,[f,...]],...] | null, "label": ...}
/// The label is task-specific and left to the caller.
nlohmann::json graph_to_json(const Graph& g);
/// Throws ParseError describing the first problem found. Edges given as
/// [j,i] with j > i are normalized.
Graph graph_from_json(const nlohmann::json& obj);

}  // namespace smp
