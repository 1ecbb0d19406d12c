#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "hyperdir/space.hpp"

namespace hyperdir::gold {

struct GoldPair {
  std::string hyponym;
  std::string hypernym;
  std::string source;
  bool is_compound = false;

  bool operator==(const GoldPair&) const = default;
};

struct LoadOptions {
  /// Accepted third-column labels, compared case-insensitively.
  std::vector<std::string> hypernymy_labels = {"hyper", "hypernym", "isa"};
};

struct LoadResult {
  std::vector<GoldPair> pairs;
  std::uint64_t skipped_short = 0;     // rows with fewer than two columns
  std::uint64_t skipped_relation = 0;  // rows labelled with another relation
};

/// TSV rows `hyponym<TAB>hypernym[<TAB>relation]`. Blank lines and lines
/// starting with '#' are ignored.
LoadResult load_pairs(std::istream& in, const std::string& source, const LoadOptions& opts = {});
/// Throws std::runtime_error if the file cannot be opened.
LoadResult load_pairs(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Drops exact duplicates (first occurrence kept), autohyponyms and pairs
/// with a space inside either term. Order is otherwise preserved.
std::vector<GoldPair> clean_pairs(const std::vector<GoldPair>& pairs);

/// True iff one lower-cased term is a substring of the other.
bool is_compound(std::string_view a, std::string_view b);

struct CompoundSplit {
  std::vector<GoldPair> compounds;
  std::vector<GoldPair> non_compounds;
};

/// Partitions pairs by the substring heuristic, setting is_compound.
CompoundSplit split_compounds(const std::vector<GoldPair>& pairs);

struct CoverageReport {
  std::uint64_t total = 0;
  std::uint64_t kept = 0;
  std::uint64_t dropped_oov = 0;
  std::uint64_t dropped_empty_row = 0;
};

struct CoverageResult {
  std::vector<GoldPair> kept;
  /// In the corpus but with an empty co-occurrence row on at least one side.
  /// Usable by the frequency baseline only.
  std::vector<GoldPair> empty_row;
  CoverageReport report;
};

CoverageResult filter_coverage(const std::vector<GoldPair>& pairs, const CountSpace& space);

}  // namespace hyperdir::gold
