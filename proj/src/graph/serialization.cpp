#include "smp/serialization.hpp"

#include <map>

#include "smp/errors.hpp"

namespace smp {

using nlohmann::json;

json graph_to_json(const Graph& g) {
  json obj;
  obj["n"] = g.n();
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  obj["edges"] = std::move(edges);
  if (g.has_node_features()) {
    json x = json::array();
    for (std::size_t i = 0; i < g.n(); ++i) {
      auto row = g.node_feature(i);
      x.push_back(std::vector<double>(row.begin(), row.end()));
    }
    obj["x"] = std::move(x);
  } else {
    obj["x"] = nullptr;
  }
  if (g.has_edge_features()) {
    json y = json::array();
    for (std::size_t k = 0; k < g.num_edges(); ++k) {
      auto row = g.edge_feature(k);
      y.push_back({g.edges()[k].u, g.edges()[k].v, std::vector<double>(row.begin(), row.end())});
    }
    obj["y"] = std::move(y);
  } else {
    obj["y"] = nullptr;
  }
  return obj;
}

namespace {

std::size_t node_index(const json& v, std::size_t n, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0 ||
      static_cast<std::size_t>(v.get<long long>()) >= n) {
    throw ParseError(std::string(what) + " endpoint is not a node index in [0, " +
                     std::to_string(n) + ")");
  }
  return v.get<std::size_t>();
}

std::vector<double> number_row(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + " row is not an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string(what) + " entry is not a number");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Graph graph_from_json(const json& obj) {
  if (!obj.is_object()) throw ParseError("graph record is not a JSON object");
  if (!obj.contains("n")) throw ParseError("missing key \"n\"");
  if (!obj.contains("edges")) throw ParseError("missing key \"edges\"");
  const auto& jn = obj["n"];
  if (!jn.is_number_integer() || jn.get<long long>() < 0) {
    throw ParseError("\"n\" is not a non-negative integer");
  }
  const auto n = jn.get<std::size_t>();
  const auto& je = obj["edges"];
  if (!je.is_array()) throw ParseError("\"edges\" is not an array");

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(je.size());
  for (const auto& e : je) {
    if (!e.is_array() || e.size() != 2) throw ParseError("edge is not a pair [i, j]");
    auto a = node_index(e[0], n, "edge");
    auto b = node_index(e[1], n, "edge");
    if (a == b) throw ParseError("self-loop on node " + std::to_string(a));
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  Graph g(n, edges);

  if (obj.contains("x") && !obj["x"].is_null()) {
    const auto& jx = obj["x"];
    if (!jx.is_array() || jx.size() != n) throw ParseError("\"x\" must have one row per node");
    std::vector<double> x;
    std::size_t dim = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = number_row(jx[i], "x");
      if (i == 0) dim = row.size();
      if (row.size() != dim) throw ParseError("\"x\" rows have differing widths");
      x.insert(x.end(), row.begin(), row.end());
    }
    if (dim > 0) g.set_node_features(dim, std::move(x));
  }

  if (obj.contains("y") && !obj["y"].is_null()) {
    const auto& jy = obj["y"];
    if (!jy.is_array()) throw ParseError("\"y\" is not an array");
    std::map<std::size_t, std::vector<double>> rows;
    std::size_t dim = 0;
    for (const auto& item : jy) {
      if (!item.is_array() || item.size() != 3) throw ParseError("\"y\" entry is not [i, j, [f...]]");
      auto a = node_index(item[0], n, "\"y\"");
      auto b = node_index(item[1], n, "\"y\"");
      auto k = g.edge_index(a, b);
      if (!k) throw ParseError("\"y\" refers to a missing edge");
      auto row = number_row(item[2], "y");
      if (rows.empty()) dim = row.size();
      if (row.size() != dim) throw ParseError("\"y\" rows have differing widths");
      rows[*k] = std::move(row);
    }
    if (rows.size() != g.num_edges()) throw ParseError("\"y\" must cover every edge exactly once");
    if (dim > 0) {
      std::vector<double> y;
      for (auto& [k, row] : rows) y.insert(y.end(), row.begin(), row.end());
      g.set_edge_features(dim, std::move(y));
    }
  }
  return g;
}

}  // namespace smp
