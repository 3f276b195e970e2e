#include "telab/ad/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "telab/common/error.hpp"
#include "telab/net/io.hpp"

namespace telab::ad {

namespace {

constexpr char kMagic[4] = {'T', 'E', 'T', 'N'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T take(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ParseError("checkpoint truncated");
  T v;
  std::memcpy(&v, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

Checkpoint capture(const ParameterSet& params, nlohmann::json meta) {
  Checkpoint c;
  c.meta = std::move(meta);
  for (const auto& p : params.entries()) {
    c.tensors.push_back({p.name, p.group, p.tensor.shape(),
                         std::vector<double>(p.tensor.values().begin(), p.tensor.values().end())});
  }
  return c;
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  nlohmann::ordered_json manifest;
  manifest["version"] = kVersion;
  manifest["meta"] = ckpt.meta;
  manifest["tensors"] = nlohmann::ordered_json::array();
  std::size_t offset = 0;
  for (const auto& t : ckpt.tensors) {
    if (t.values.size() != t.shape.size()) throw ShapeError("tensor '" + t.name + "' size mismatch");
    manifest["tensors"].push_back({{"name", t.name},
                                   {"group", t.group},
                                   {"dtype", "f64"},
                                   {"shape", {t.shape.rows, t.shape.cols}},
                                   {"offset", offset},
                                   {"count", t.values.size()}});
    offset += t.values.size();
  }
  const std::string text = manifest.dump();
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, text.size());
  out += text;
  for (const auto& t : ckpt.tensors) {
    for (double v : t.values) put<double>(out, v);
  }
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError("not a tensor checkpoint (bad magic)");
  }
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(bytes, pos);
  if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  const auto mlen = take<std::uint64_t>(bytes, pos);
  if (pos + mlen > bytes.size()) throw ParseError("checkpoint manifest truncated");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(pos, mlen));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint manifest: ") + e.what());
  }
  pos += mlen;
  const std::size_t payload = pos;
  const std::size_t available = (bytes.size() - payload) / sizeof(double);
  Checkpoint c;
  try {
    c.meta = manifest.value("meta", nlohmann::json::object());
    for (const auto& entry : manifest.at("tensors")) {
      if (entry.at("dtype").get<std::string>() != "f64") throw ParseError("unsupported dtype");
      NamedTensor t;
      t.name = entry.at("name").get<std::string>();
      t.group = entry.value("group", "");
      t.shape = {entry.at("shape").at(0).get<std::size_t>(), entry.at("shape").at(1).get<std::size_t>()};
      const auto offset = entry.at("offset").get<std::size_t>();
      const auto count = entry.at("count").get<std::size_t>();
      if (count != t.shape.size() || offset + count > available) {
        throw ParseError("tensor '" + t.name + "' exceeds checkpoint payload");
      }
      t.values.resize(count);
      std::memcpy(t.values.data(), bytes.data() + payload + offset * sizeof(double),
                  count * sizeof(double));
      c.tensors.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint manifest: ") + e.what());
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  net::write_text_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(net::read_text_file(path));
}

void apply_checkpoint(ParameterSet& params, const Checkpoint& ckpt) {
  std::unordered_map<std::string, const NamedTensor*> by_name;
  for (const auto& t : ckpt.tensors) by_name[t.name] = &t;
  for (const auto& p : params.entries()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw ShapeError("checkpoint lacks parameter '" + p.name + "'");
    if (!(it->second->shape == p.tensor.shape())) {
      throw ShapeError("checkpoint shape mismatch for '" + p.name + "'");
    }
  }
  for (const auto& p : params.entries()) {
    Tensor t = p.tensor;
    const auto& src = by_name.at(p.name)->values;
    std::copy(src.begin(), src.end(), t.mutable_values().begin());
  }
}

}  // namespace telab::ad
