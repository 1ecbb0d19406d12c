#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "hyperdir/corpus.hpp"
#include "hyperdir/methods.hpp"

namespace hyperdir {

struct RunConfig {
  std::vector<std::filesystem::path> corpora;
  std::string tagset = "penn";
  corpus::PosConfig pos = corpus::PosConfig::penn();
  std::size_t window = 10;
  std::size_t k = 50;
  std::size_t buckets = 10;
  std::vector<MethodId> methods{kAllMethods.begin(), kAllMethods.end()};
  std::filesystem::path space;
  std::vector<std::filesystem::path> gold;
  std::filesystem::path out = ".";
  unsigned threads = 0;
  bool write_pairs = false;

  /// Throws std::invalid_argument on a violated range or tag configuration.
  void validate() const;
};

/// Applies `key = value` lines onto `cfg`. '#' and ';' start comments,
/// `[section]` headers are ignored. `corpus` and `gold` accumulate; setting
/// `tagset` resets the tag prefixes, which later prefix keys may override.
/// Throws std::invalid_argument naming the line on unknown keys or bad values.
void apply_config(std::istream& in, RunConfig& cfg, const std::string& name = "<config>");
void apply_config_file(const std::filesystem::path& path, RunConfig& cfg);

}  // namespace hyperdir
