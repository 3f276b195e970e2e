#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "telab/ad/parameters.hpp"

// Named-tensor container:
//   bytes 0..3   magic "TETN"
//   u32 LE       format version (1)
//   u64 LE       manifest length in bytes
//   manifest     UTF-8 JSON {"version", "meta", "tensors": [{name, group,
//                dtype "f64", shape [r, c], offset, count}]}
//   payload      f64 little-endian values, tensors back to back
// `offset` and `count` are in elements from the start of the payload.
namespace telab::ad {

struct NamedTensor {
  std::string name;
  std::string group;
  Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedTensor> tensors;
};

Checkpoint capture(const ParameterSet& params, nlohmann::json meta = nlohmann::json::object());
std::string encode_checkpoint(const Checkpoint& ckpt);
// Throws ParseError on a malformed container.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies values into same-named parameters. Every parameter must be present
// with a matching shape (ShapeError otherwise). Frozen groups are loaded too.
void apply_checkpoint(ParameterSet& params, const Checkpoint& ckpt);

}  // namespace telab::ad
