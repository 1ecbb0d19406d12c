#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hyperdir/space.hpp"

namespace hyperdir {

// Binary cache layout, all integers little-endian:
//   "HDSP" | u32 version | u64 words | u64 cells
//   words x (u32 byte length, UTF-8 lemma)      in id order
//   words x u64 frequency
//   (words + 1) x u64 row offset
//   cells x (u32 feature id, u64 count)
inline constexpr std::uint32_t kSpaceFormatVersion = 1;

/// Wrong magic number or format version.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated or internally inconsistent cache.
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string save_space(const CountSpace& space);
CountSpace load_space(std::string_view bytes);

void save_space_file(const CountSpace& space, const std::filesystem::path& path);
CountSpace load_space_file(const std::filesystem::path& path);

}  // namespace hyperdir
