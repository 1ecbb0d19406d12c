#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperdir/space.hpp"

namespace hyperdir {

enum class MethodId { WordLength, WordFrequency, WeedsPrec, InvCL, SlqsRow, SlqsSec };

inline constexpr std::array<MethodId, 6> kAllMethods = {MethodId::WordLength, MethodId::WordFrequency,
                                                        MethodId::WeedsPrec,  MethodId::InvCL,
                                                        MethodId::SlqsRow,    MethodId::SlqsSec};

std::string_view to_string(MethodId m);
std::optional<MethodId> parse_method(std::string_view name);
/// Comma-separated method names. Throws std::invalid_argument on an unknown
/// or repeated name, or an empty list.
std::vector<MethodId> parse_method_list(std::string_view list);

/// Verdict for an ordered word pair (w1, w2).
enum class Decision { FirstIsHypernym, SecondIsHypernym, Tie };

std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view s);
Decision mirror(Decision d);

struct ScoredPair {
  std::string w1;
  std::string w2;
  MethodId method;
  std::optional<double> score_12;
  std::optional<double> score_21;
  Decision decision = Decision::Tie;
  bool out_of_vocabulary = false;
};

/// Share of x's mass on features it shares with y. Absent if x is empty.
std::optional<double> weeds_prec(SparseView x, SparseView y);
/// Sum of pointwise minima over x's mass. Absent if x is empty.
std::optional<double> cde(SparseView x, SparseView y);
/// sqrt(cde(x,y) * (1 - cde(y,x))). Absent if either cde is.
std::optional<double> inv_cl(SparseView x, SparseView y);

struct Verdict {
  Decision decision;
  std::optional<double> score;
};

/// Entropy comparison: the higher-entropy word is the hypernym. The score is
/// 1 - hx/hy when hy > 0. An absent input yields a Tie without score.
Verdict slqs_row(std::optional<double> hx, std::optional<double> hy);
/// Same rule over median second-order entropies.
Verdict slqs_sec(std::optional<double> ex, std::optional<double> ey);

/// The shorter lemma (in characters) is the hypernym.
Decision baseline_length(std::string_view w1, std::string_view w2);
/// The more frequent lemma is the hypernym.
Decision baseline_frequency(std::uint64_t f1, std::uint64_t f2);

/// Scores word pairs against one space. Row entropies are computed up front;
/// second-order entropies are memoized on first use. Safe for concurrent
/// calls to decide().
class DirectionScorer {
 public:
  DirectionScorer(const CountSpace& space, const WeightedSpace& wspace, std::size_t k = 50, unsigned threads = 1);

  ScoredPair decide(MethodId method, std::string_view w1, std::string_view w2) const;

  const CountSpace& space() const { return space_; }
  std::optional<double> row_entropy(WordId id) const { return entropies_[id]; }
  std::optional<double> second_order_entropy(WordId id) const;

 private:
  const CountSpace& space_;
  const WeightedSpace& wspace_;
  std::size_t k_;
  EntropyTable entropies_;
  mutable std::mutex memo_mu_;
  mutable std::unordered_map<WordId, std::optional<double>> memo_;
};

/// One-shot convenience over a temporary DirectionScorer.
ScoredPair decide(MethodId method, std::string_view w1, std::string_view w2, const CountSpace& space,
                  const WeightedSpace& wspace, std::size_t k = 50);

}  // namespace hyperdir
