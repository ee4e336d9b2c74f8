#include "smp/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smp/errors.hpp"

namespace smp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("bad value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);
  auto size = [&] { return parse_number<std::size_t>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  if (key == "task") task = value;
  else if (key == "model") model = value;
  else if (key == "layers") layers = size();
  else if (key == "width") width = size();
  else if (key == "hidden_layers") hidden_layers = size();
  else if (key == "head_width") head_width = size();
  else if (key == "lr") lr = real();
  else if (key == "beta1") beta1 = real();
  else if (key == "beta2") beta2 = real();
  else if (key == "eps") eps = real();
  else if (key == "batch_size") batch_size = size();
  else if (key == "epochs") epochs = size();
  else if (key == "patience") patience = size();
  else if (key == "lr_patience") lr_patience = size();
  else if (key == "lr_factor") lr_factor = real();
  else if (key == "min_lr") min_lr = real();
  else if (key == "val_fraction") val_fraction = real();
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "train") train = value;
  else if (key == "test") test = value;
  else if (key == "out") out = value;
  else if (key == "coloring") coloring = size();
  else if (key == "norm") norm = value;
  else if (key == "max_seconds") max_seconds = real();
  else throw ConfigError("unknown config key '" + raw_key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      cfg.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

void RunConfig::validate(bool need_files) const {
  if (task != "cycles" && task != "multitask") throw ConfigError("unknown task '" + task + "'");
  if (model != "smp-fast" && model != "smp-default" && model != "mpnn") {
    throw ConfigError("unknown model '" + model + "'");
  }
  if (layers < 1 || width < 1 || batch_size < 1) {
    throw ConfigError("layers, width and batch_size must be >= 1");
  }
  if (!(lr > 0.0) || !(min_lr > 0.0) || !(lr_factor > 0.0 && lr_factor < 1.0)) {
    throw ConfigError("learning-rate settings out of range");
  }
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) throw ConfigError("val_fraction must lie in [0, 1)");
  if (norm != "graph" && norm != "none") throw ConfigError("unknown norm '" + norm + "'");
  if (coloring > 0 && model == "mpnn") throw ConfigError("coloring applies to SMP models only");
  if (need_files) {
    for (const auto* p : {&train, &test}) {
      if (p->empty()) throw ConfigError("train and test dataset paths are required");
      if (!std::filesystem::exists(*p)) throw ConfigError("dataset not found: " + *p);
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  return {{"task", task},
          {"model", model},
          {"layers", std::to_string(layers)},
          {"width", std::to_string(width)},
          {"hidden_layers", std::to_string(hidden_layers)},
          {"head_width", std::to_string(head_width)},
          {"lr", format_double(lr)},
          {"beta1", format_double(beta1)},
          {"beta2", format_double(beta2)},
          {"eps", format_double(eps)},
          {"batch_size", std::to_string(batch_size)},
          {"epochs", std::to_string(epochs)},
          {"patience", std::to_string(patience)},
          {"lr_patience", std::to_string(lr_patience)},
          {"lr_factor", format_double(lr_factor)},
          {"min_lr", format_double(min_lr)},
          {"val_fraction", format_double(val_fraction)},
          {"seed", std::to_string(seed)},
          {"train", train},
          {"test", test},
          {"out", out},
          {"coloring", std::to_string(coloring)},
          {"norm", norm},
          {"max_seconds", format_double(max_seconds)}};
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : entries()) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace smp
