#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdir/gold.hpp"
#include "hyperdir/methods.hpp"

namespace hyperdir::eval {

/// One gold pair presented as (hyponym, hypernym) with a verdict per method.
struct DecisionRow {
  gold::GoldPair pair;
  std::uint64_t freq_hyponym = 0;
  std::uint64_t freq_hypernym = 0;
  std::vector<Decision> decisions;            // parallel to DecisionTable::methods
  std::vector<std::optional<double>> score_12;  // hyponym -> hypernym
  std::vector<std::optional<double>> score_21;
};

struct DecisionTable {
  std::vector<MethodId> methods;
  std::vector<DecisionRow> rows;

  /// Column of `m`; throws std::invalid_argument if the table lacks it.
  std::size_t column(MethodId m) const;
  std::size_t size() const { return rows.size(); }
};

/// A decision is correct iff it names the gold hypernym, the second element.
inline bool is_correct(Decision d) { return d == Decision::SecondIsHypernym; }

/// Scores every pair with every method. Rows keep the order of `pairs`;
/// the result does not depend on `threads`.
DecisionTable evaluate(const std::vector<gold::GoldPair>& pairs, const std::vector<MethodId>& methods,
                       const DirectionScorer& scorer, unsigned threads = 1);

struct AccuracyResult {
  MethodId method;
  std::uint64_t rows = 0;
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;
  std::uint64_t ties = 0;
  /// Absent when rows == 0.
  std::optional<double> accuracy_strict;
  std::optional<double> accuracy_half;
};

AccuracyResult accuracy(const DecisionTable& table, MethodId method);
/// Accuracy restricted to the given row indices.
AccuracyResult accuracy(const DecisionTable& table, MethodId method, std::span<const std::size_t> rows);

/// Share of rows on which both methods emit the same label. Absent for an
/// empty table.
std::optional<double> smc(const DecisionTable& table, MethodId a, MethodId b);

struct BucketPartition {
  std::vector<std::vector<std::size_t>> buckets;
};

/// Sorts rows by freq(hypernym) - freq(hyponym), descending, ties by
/// (hyponym, hypernym), and cuts them into n contiguous buckets; the first
/// rows % n buckets get one extra row. Throws std::invalid_argument if n == 0.
BucketPartition frequency_buckets(const DecisionTable& table, std::size_t n = 10);

/// [bucket][method] accuracies, buckets in order, methods as given.
std::vector<std::vector<AccuracyResult>> bucket_accuracies(const DecisionTable& table,
                                                           const BucketPartition& partition,
                                                           const std::vector<MethodId>& methods);

struct Complementarity {
  MethodId first;   // the method whose incorrect rows are examined
  MethodId second;  // the method that may get them right
  std::uint64_t first_incorrect = 0;
  std::uint64_t second_correct = 0;
  std::optional<double> proportion;
};

Complementarity complementarity_counts(const DecisionTable& table, MethodId a, MethodId b);
/// Among rows where `a` is not correct, the share where `b` is correct.
/// Absent when `a` has no incorrect row.
std::optional<double> complementarity(const DecisionTable& table, MethodId a, MethodId b);

// CSV renderings. Every output starts with a header row.
std::string decisions_csv(const DecisionTable& table);
std::string accuracy_csv(const std::vector<AccuracyResult>& results);
std::string smc_csv(const DecisionTable& table, const std::vector<MethodId>& methods);
std::string buckets_csv(const std::vector<std::vector<AccuracyResult>>& per_bucket);
std::string complementarity_csv(const DecisionTable& table, const std::vector<MethodId>& methods);
std::string coverage_csv(const std::string& subset, const gold::CoverageReport& report);

/// Reads a table written by decisions_csv. Throws std::runtime_error with
/// the offending line on malformed input.
DecisionTable read_decisions_csv(std::istream& in);
DecisionTable read_decisions_csv(const std::filesystem::path& path);

/// Writes `content` to `path`. Throws std::runtime_error if not writable.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hyperdir::eval
