#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace telab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x);

// Seed for a named subsystem derived from the single global seed:
//   mix_seed(global ^ fnv1a64(name)).
// Every random stream in the project is created through this function
// (or receives an explicit seed from a caller that used it).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view subsystem);

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

}  // namespace telab
