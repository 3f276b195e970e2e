#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace telab {

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::span<const double> values,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

// Checksum of a file's bytes, hex encoded.
std::string file_checksum(const std::filesystem::path& path);

}  // namespace telab
