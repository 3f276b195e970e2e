#include "telab/common/checksum.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "telab/common/error.hpp"

namespace telab {

namespace {
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a64(std::span<const double> values, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (double v : values) {
    std::array<unsigned char, sizeof(double)> raw{};
    std::memcpy(raw.data(), &v, sizeof(double));
    for (unsigned char c : raw) {
      h ^= c;
      h *= kFnvPrime;
    }
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for checksum");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 14> buffer{};
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    h = fnv1a64(std::string_view(buffer.data(), got), h);
  }
  return hex64(h);
}

}  // namespace telab
