#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "smp/params.hpp"

// Checkpoint layout:
//
//   smp-checkpoint 1\n
//   meta <key> <value>\n          (any number, value runs to end of line)
//   tensor <name> <rank> <d0> ... <d_rank-1>\n   (one per tensor, in order)
//   end\n
//   <raw little-endian float64 values of every tensor, concatenated in
//    manifest order, row-major>
namespace smp {

struct Checkpoint {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<NamedParam> tensors;

  // Empty string if absent.
  std::string meta_value(const std::string& key) const;
};

void write_checkpoint(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, std::string>>& meta,
                      const ParamList& params);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Copies checkpoint values into `params`, matched by name; throws
/// CheckpointError on a missing tensor or shape mismatch.
void load_parameters(const Checkpoint& ckpt, ParamList& params);

}  // namespace smp
