#include "smp/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "smp/errors.hpp"

namespace smp {

namespace {

constexpr const char* kMagic = "smp-checkpoint 1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
  }
}

}  // namespace

std::string Checkpoint::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  return {};
}

void write_checkpoint(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& meta,
                      const ParamList& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
  out << kMagic << '\n';
  for (const auto& [k, v] : meta) {
    if (k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw CheckpointError("checkpoint meta key/value not representable: " + k);
    }
    out << "meta " << k << ' ' << v << '\n';
  }
  for (const auto& p : params) {
    out << "tensor " << p.name << ' ' << p.tensor.rank();
    for (auto d : p.tensor.shape()) out << ' ' << d;
    out << '\n';
  }
  out << "end\n";
  for (const auto& p : params) {
    for (double v : p.tensor.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = to_little_endian(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw CheckpointError(path.string() + " is not a checkpoint");
  }
  Checkpoint ckpt;
  std::vector<Shape> shapes;
  std::vector<std::string> names;
  bool ended = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "meta") {
      std::string key;
      fields >> key;
      std::string value;
      std::getline(fields, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      ckpt.meta.emplace_back(key, value);
    } else if (kind == "tensor") {
      std::string name;
      std::size_t rank = 0;
      if (!(fields >> name >> rank)) throw CheckpointError("bad tensor line: " + line);
      Shape shape(rank);
      for (auto& d : shape) {
        if (!(fields >> d)) throw CheckpointError("bad tensor line: " + line);
      }
      names.push_back(name);
      shapes.push_back(shape);
    } else {
      throw CheckpointError("unexpected manifest line: " + line);
    }
  }
  if (!ended) throw CheckpointError("checkpoint manifest not terminated");
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> values(shape_numel(shapes[k]));
    for (auto& v : values) {
      std::uint64_t bits;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        throw CheckpointError("checkpoint truncated in tensor '" + names[k] + "'");
      }
      bits = to_little_endian(bits);
      std::memcpy(&v, &bits, sizeof v);
    }
    ckpt.tensors.push_back({names[k], Tensor(shapes[k], std::move(values), false)});
  }
  return ckpt;
}

void load_parameters(const Checkpoint& ckpt, ParamList& params) {
  for (auto& p : params) {
    auto it = std::find_if(ckpt.tensors.begin(), ckpt.tensors.end(),
                           [&](const NamedParam& t) { return t.name == p.name; });
    if (it == ckpt.tensors.end()) {
      throw CheckpointError("checkpoint has no tensor '" + p.name + "'");
    }
    if (it->tensor.shape() != p.tensor.shape()) {
      throw CheckpointError("tensor '" + p.name + "' has shape " +
                            shape_string(it->tensor.shape()) + " in checkpoint, model expects " +
                            shape_string(p.tensor.shape()));
    }
    auto dst = p.tensor.mutable_values();
    auto src = it->tensor.values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

}  // namespace smp
