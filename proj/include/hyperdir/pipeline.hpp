#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperdir/config.hpp"
#include "hyperdir/corpus.hpp"

namespace hyperdir {

/// A failure tagged with the pipeline stage it happened in.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct BuildSummary {
  corpus::IngestStats stats;
  std::uint64_t vocab_size = 0;
  std::uint64_t cells = 0;
  std::uint64_t total = 0;
};

std::string format_summary(const BuildSummary& s);

/// Counts cfg.corpora and writes the cache to cfg.space.
BuildSummary cmd_build_space(const RunConfig& cfg);

/// For every gold file: clean, split into compound / noncompound subsets,
/// filter by coverage, score and write
/// `<gold>.<subset>.{decisions,accuracy,smc,buckets,complementarity,coverage}.csv`
/// into cfg.out. Returns the written paths in order.
std::vector<std::filesystem::path> cmd_evaluate(const RunConfig& cfg);

/// Re-derive one analysis from a persisted decision table. The output file
/// name is the decision table's with `decisions` replaced by the kind.
std::filesystem::path cmd_smc(const std::filesystem::path& decisions, const RunConfig& cfg);
std::filesystem::path cmd_buckets(const std::filesystem::path& decisions, const RunConfig& cfg);
std::filesystem::path cmd_complement(const std::filesystem::path& decisions, const RunConfig& cfg);

}  // namespace hyperdir
