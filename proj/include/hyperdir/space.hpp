#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperdir {

using WordId = std::uint32_t;

/// Bidirectional lemma <-> dense id map. Ids are contiguous from 0.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Builds a vocabulary whose id order is the order of `lemmas`.
  /// Throws std::invalid_argument on duplicates.
  explicit Vocabulary(std::vector<std::string> lemmas);

  std::optional<WordId> find(std::string_view lemma) const;
  const std::string& lemma(WordId id) const { return lemmas_.at(id); }
  std::size_t size() const { return lemmas_.size(); }
  const std::vector<std::string>& lemmas() const { return lemmas_; }

  /// Appends `lemma` if unseen; returns its id either way.
  WordId intern(std::string_view lemma);

  bool operator==(const Vocabulary& other) const { return lemmas_ == other.lemmas_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> lemmas_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> ids_;
};

/// One nonzero feature of a sparse row.
struct Cell {
  WordId feature;
  double value;

  bool operator==(const Cell&) const = default;
};

/// Read-only view of a row: strictly increasing feature ids, values > 0.
using SparseView = std::span<const Cell>;

/// Owning sparse vector. The constructor sorts, merges duplicates by addition
/// and drops non-positive values, so the row invariant always holds.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::vector<Cell> cells);

  SparseView view() const { return cells_; }
  operator SparseView() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const std::vector<Cell>& cells() const { return cells_; }

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Cell> cells_;
};

/// A (row, feature, count) entry used to assemble a CountSpace.
struct Triplet {
  WordId row;
  WordId feature;
  std::uint64_t count;
};

/// Sparse co-occurrence count matrix over a vocabulary, CSR layout.
/// Rows and features share the vocabulary id space. Immutable once built.
class CountSpace {
 public:
  CountSpace() : offsets_{0} {}

  /// `freq` must have one entry per vocabulary id. Triplets may arrive in any
  /// order and repeat; repeated coordinates are summed, zero counts dropped.
  /// Throws std::invalid_argument on out-of-range ids.
  CountSpace(Vocabulary vocab, std::vector<std::uint64_t> freq, std::vector<Triplet> triplets);

  /// Builds from CSR arrays that already satisfy the row invariant.
  /// Throws std::invalid_argument otherwise.
  static CountSpace from_csr(Vocabulary vocab, std::vector<std::uint64_t> freq,
                             std::vector<std::uint64_t> offsets, std::vector<Cell> cells);

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }
  std::size_t nnz() const { return cells_.size(); }

  SparseView row(WordId id) const;
  /// Absent for out-of-vocabulary lemmas; an in-vocabulary lemma without
  /// co-occurrences yields an empty view.
  std::optional<SparseView> row(std::string_view lemma) const;

  std::uint64_t freq(WordId id) const { return freq_.at(id); }
  /// Zero for out-of-vocabulary lemmas.
  std::uint64_t freq(std::string_view lemma) const;
  std::uint64_t row_sum(WordId id) const { return row_sum_.at(id); }
  std::uint64_t col_sum(WordId id) const { return col_sum_.at(id); }
  std::uint64_t total() const { return total_; }

  const std::vector<std::uint64_t>& frequencies() const { return freq_; }
  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Count stored at (row, feature), zero if absent.
  std::uint64_t count(WordId row, WordId feature) const;

  bool operator==(const CountSpace& other) const;

 private:
  void derive_marginals();

  Vocabulary vocab_;
  std::vector<std::uint64_t> freq_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Cell> cells_;
  std::vector<std::uint64_t> row_sum_;
  std::vector<std::uint64_t> col_sum_;
  std::uint64_t total_ = 0;
};

/// Positive local mutual information weights of a CountSpace, same CSR
/// layout. Only strictly positive weights are stored.
class WeightedSpace {
 public:
  WeightedSpace() : offsets_{0} {}
  WeightedSpace(std::vector<std::uint64_t> offsets, std::vector<Cell> cells)
      : offsets_(std::move(offsets)), cells_(std::move(cells)) {}

  std::size_t size() const { return offsets_.size() - 1; }
  SparseView row(WordId id) const;
  const std::vector<Cell>& cells() const { return cells_; }

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<Cell> cells_;
};

/// weight(w,f) = c(w,f) * log2(c(w,f) * N / (row_sum(w) * col_sum(f))),
/// entries with weight <= 0 dropped. An empty space yields an empty result.
WeightedSpace plmi(const CountSpace& space, unsigned threads = 1);

/// The `k` highest-weighted features of `row`, weight descending, ties by
/// ascending feature id. Throws std::invalid_argument if k == 0.
std::vector<WordId> top_contexts(SparseView row, std::size_t k);
std::vector<WordId> top_contexts(const CountSpace& space, const WeightedSpace& wspace,
                                 std::string_view lemma, std::size_t k = 50);

/// Shannon entropy in bits of the distribution proportional to `v`.
/// Absent for an empty vector.
std::optional<double> entropy(SparseView v);

/// Median of `values` (mean of the two central values for even sizes).
/// Absent for an empty input. Reorders `values`.
std::optional<double> median(std::vector<double>& values);

/// First-order entropy of every row of a space, computed once.
class EntropyTable {
 public:
  EntropyTable() = default;
  explicit EntropyTable(const CountSpace& space, unsigned threads = 1);

  std::optional<double> operator[](WordId id) const {
    const double h = values_.at(id);
    if (h < 0) return std::nullopt;
    return h;
  }

 private:
  // Negative marks an empty row.
  std::vector<double> values_;
};

/// Median raw-row entropy of the lemma's top-k PLMI contexts, skipping
/// contexts with empty rows. Absent when no usable context exists.
std::optional<double> second_order_entropy(const WeightedSpace& wspace, const EntropyTable& entropies, WordId word,
                                           std::size_t k);
std::optional<double> second_order_entropy(const CountSpace& space, const WeightedSpace& wspace,
                                           std::string_view lemma, std::size_t k = 50);

}  // namespace hyperdir
