#include "telab/common/rng.hpp"

#include "telab/common/checksum.hpp"

namespace telab {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view subsystem) {
  return mix_seed(global_seed ^ fnv1a64(subsystem));
}

}  // namespace telab
