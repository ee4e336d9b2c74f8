#include <cmath>
#include <filesystem>
#include <fstream>

#include "smp/datasets.hpp"
#include "smp/errors.hpp"
#include "smp/serialization.hpp"

namespace smp {

using nlohmann::json;

json record_label(const Dataset& ds, const Record& r) {
  if (ds.task == "cycles") return r.label;
  const auto& t = r.targets;
  return {{"source", r.source},       {"dist", t.dist},         {"ecc", t.ecc},
          {"lap", t.lap},             {"connected", t.connected}, {"diameter", t.diameter},
          {"radius", t.radius}};
}

void write_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset to " + path);
  for (const auto& r : ds.records) {
    json obj = graph_to_json(r.graph);
    obj["label"] = record_label(ds, r);
    out << obj.dump() << '\n';
  }
  std::ofstream meta(path + ".meta.json", std::ios::binary);
  if (!meta) throw ConfigError("cannot write dataset metadata to " + path + ".meta.json");
  json m = {{"task", ds.task}, {"k", ds.k}, {"seed", ds.seed}, {"config", ds.config}};
  meta << m.dump(2) << '\n';
}

namespace {

std::vector<double> number_list(const json& label, const char* key, std::size_t n) {
  if (!label.contains(key) || !label[key].is_array() || label[key].size() != n) {
    throw ParseError(std::string("label \"") + key + "\" must list one number per node");
  }
  std::vector<double> out;
  for (const auto& v : label[key]) {
    if (!v.is_number()) throw ParseError(std::string("label \"") + key + "\" holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

double number(const json& label, const char* key) {
  if (!label.contains(key) || !label[key].is_number()) {
    throw ParseError(std::string("label \"") + key + "\" missing or not a number");
  }
  return label[key].get<double>();
}

void parse_label(const json& label, const std::string& task, Record& r) {
  if (task == "cycles") {
    if (!label.is_number_integer() || (label.get<int>() != 0 && label.get<int>() != 1)) {
      throw ParseError("cycle label must be 0 or 1");
    }
    r.label = label.get<int>();
    return;
  }
  if (!label.is_object()) throw ParseError("multitask label must be an object");
  const std::size_t n = r.graph.n();
  if (!label.contains("source") || !label["source"].is_number_integer() ||
      label["source"].get<long long>() < 0 ||
      static_cast<std::size_t>(label["source"].get<long long>()) >= n) {
    throw ParseError("label \"source\" is not a node index");
  }
  r.source = label["source"].get<std::size_t>();
  r.targets.dist = number_list(label, "dist", n);
  r.targets.ecc = number_list(label, "ecc", n);
  r.targets.lap = number_list(label, "lap", n);
  if (!label.contains("connected") || !label["connected"].is_boolean()) {
    throw ParseError("label \"connected\" missing or not a boolean");
  }
  r.targets.connected = label["connected"].get<bool>();
  r.targets.diameter = number(label, "diameter");
  r.targets.radius = number(label, "radius");
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read dataset " + path);
  Dataset ds;
  const std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta(meta_path, std::ios::binary);
    try {
      json m = json::parse(meta);
      ds.task = m.at("task").get<std::string>();
      ds.k = m.at("k").get<std::size_t>();
      ds.seed = m.at("seed").get<std::uint64_t>();
      ds.config = m.at("config");
    } catch (const json::exception& e) {
      throw ParseError(meta_path + ": " + e.what());
    }
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
      }
      Record r;
      r.graph = graph_from_json(obj);
      if (!obj.contains("label")) throw ParseError("missing key \"label\"");
      if (ds.task.empty()) ds.task = obj["label"].is_object() ? "multitask" : "cycles";
      parse_label(obj["label"], ds.task, r);
      ds.records.push_back(std::move(r));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (ds.task.empty()) ds.task = "cycles";
  return ds;
}

std::optional<std::string> check_labels(const Dataset& ds) {
  for (std::size_t idx = 0; idx < ds.records.size(); ++idx) {
    const auto& r = ds.records[idx];
    if (ds.task == "cycles") {
      const int expected = count_k_cycles(r.graph, ds.k) > 0 ? 1 : 0;
      if (expected != r.label) {
        return "record " + std::to_string(idx) + ": label " + std::to_string(r.label) +
               ", oracle says " + std::to_string(expected);
      }
      continue;
    }
    const std::size_t n = r.graph.n();
    if (r.graph.node_feature_dim() != 2) return "record " + std::to_string(idx) + ": expected 2 node features";
    std::vector<double> signal(n);
    for (std::size_t i = 0; i < n; ++i) signal[i] = r.graph.node_feature(i)[1];
    const auto expected = multitask_targets(r.graph, r.source, signal);
    if (!(expected == r.targets)) {
      return "record " + std::to_string(idx) + ": stored targets differ from the oracle";
    }
  }
  return std::nullopt;
}

}  // namespace smp
