#include "hyperdir/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "hyperdir/parallel.hpp"

namespace hyperdir {

Vocabulary::Vocabulary(std::vector<std::string> lemmas) {
  ids_.reserve(lemmas.size());
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    if (!ids_.emplace(lemmas[i], static_cast<WordId>(i)).second) {
      throw std::invalid_argument(fmt::format("duplicate lemma in vocabulary: '{}'", lemmas[i]));
    }
  }
  lemmas_ = std::move(lemmas);
}

std::optional<WordId> Vocabulary::find(std::string_view lemma) const {
  auto it = ids_.find(lemma);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::intern(std::string_view lemma) {
  auto it = ids_.find(lemma);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<WordId>(lemmas_.size());
  lemmas_.emplace_back(lemma);
  ids_.emplace(lemmas_.back(), id);
  return id;
}

SparseVector::SparseVector(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.feature < b.feature; });
  for (const Cell& c : cells) {
    if (!cells_.empty() && cells_.back().feature == c.feature) {
      cells_.back().value += c.value;
    } else {
      cells_.push_back(c);
    }
  }
  std::erase_if(cells_, [](const Cell& c) { return !(c.value > 0); });
}

CountSpace::CountSpace(Vocabulary vocab, std::vector<std::uint64_t> freq, std::vector<Triplet> triplets)
    : vocab_(std::move(vocab)), freq_(std::move(freq)) {
  const std::size_t n = vocab_.size();
  if (freq_.size() != n) throw std::invalid_argument("frequency table does not match vocabulary size");
  for (const Triplet& t : triplets) {
    if (t.row >= n || t.feature >= n) {
      throw std::invalid_argument(fmt::format("cell ({}, {}) outside vocabulary of size {}", t.row, t.feature, n));
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.feature < b.feature;
  });
  offsets_.assign(n + 1, 0);
  cells_.reserve(triplets.size());
  std::size_t i = 0;
  for (WordId r = 0; r < n; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const WordId f = triplets[i].feature;
      std::uint64_t c = 0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].feature == f) c += triplets[i++].count;
      if (c > 0) cells_.push_back({f, static_cast<double>(c)});
    }
    offsets_[r + 1] = cells_.size();
  }
  derive_marginals();
}

CountSpace CountSpace::from_csr(Vocabulary vocab, std::vector<std::uint64_t> freq, std::vector<std::uint64_t> offsets,
                                std::vector<Cell> cells) {
  const std::size_t n = vocab.size();
  if (freq.size() != n) throw std::invalid_argument("frequency table does not match vocabulary size");
  if (offsets.size() != n + 1 || offsets.front() != 0 || offsets.back() != cells.size()) {
    throw std::invalid_argument("row offsets do not match cell count");
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (offsets[r] > offsets[r + 1]) throw std::invalid_argument("row offsets are not monotone");
    for (std::uint64_t j = offsets[r]; j < offsets[r + 1]; ++j) {
      const Cell& c = cells[j];
      if (c.feature >= n) throw std::invalid_argument(fmt::format("feature id {} outside vocabulary", c.feature));
      if (!(c.value > 0) || c.value != std::floor(c.value)) {
        throw std::invalid_argument(fmt::format("cell ({}, {}) is not a positive count", r, c.feature));
      }
      if (j > offsets[r] && cells[j - 1].feature >= c.feature) {
        throw std::invalid_argument(fmt::format("row {} features are not strictly increasing", r));
      }
    }
  }
  CountSpace s;
  s.vocab_ = std::move(vocab);
  s.freq_ = std::move(freq);
  s.offsets_ = std::move(offsets);
  s.cells_ = std::move(cells);
  s.derive_marginals();
  return s;
}

void CountSpace::derive_marginals() {
  const std::size_t n = vocab_.size();
  row_sum_.assign(n, 0);
  col_sum_.assign(n, 0);
  total_ = 0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::uint64_t j = offsets_[r]; j < offsets_[r + 1]; ++j) {
      const auto c = static_cast<std::uint64_t>(cells_[j].value);
      row_sum_[r] += c;
      col_sum_[cells_[j].feature] += c;
    }
    total_ += row_sum_[r];
  }
}

SparseView CountSpace::row(WordId id) const {
  if (id >= vocab_.size()) throw std::out_of_range(fmt::format("word id {} out of range", id));
  return SparseView(cells_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::optional<SparseView> CountSpace::row(std::string_view lemma) const {
  const auto id = vocab_.find(lemma);
  if (!id) return std::nullopt;
  return row(*id);
}

std::uint64_t CountSpace::freq(std::string_view lemma) const {
  const auto id = vocab_.find(lemma);
  return id ? freq_[*id] : 0;
}

std::uint64_t CountSpace::count(WordId r, WordId feature) const {
  const SparseView v = row(r);
  auto it = std::lower_bound(v.begin(), v.end(), feature, [](const Cell& c, WordId f) { return c.feature < f; });
  if (it == v.end() || it->feature != feature) return 0;
  return static_cast<std::uint64_t>(it->value);
}

bool CountSpace::operator==(const CountSpace& other) const {
  return vocab_ == other.vocab_ && freq_ == other.freq_ && offsets_ == other.offsets_ && cells_ == other.cells_;
}

SparseView WeightedSpace::row(WordId id) const {
  if (id + 1 >= offsets_.size()) throw std::out_of_range(fmt::format("word id {} out of range", id));
  return SparseView(cells_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

WeightedSpace plmi(const CountSpace& space, unsigned threads) {
  const std::size_t n = space.size();
  const double total = static_cast<double>(space.total());
  // Two passes so rows can be filled in parallel into fixed slots.
  std::vector<std::vector<Cell>> rows(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const double rs = static_cast<double>(space.row_sum(static_cast<WordId>(r)));
      for (const Cell& c : space.row(static_cast<WordId>(r))) {
        const double cs = static_cast<double>(space.col_sum(c.feature));
        const double ratio = (c.value * total) / (rs * cs);
        if (!(ratio > 1.0)) continue;
        const double w = c.value * std::log2(ratio);
        if (w > 0) rows[r].push_back({c.feature, w});
      }
    }
  });
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r) offsets[r + 1] = offsets[r] + rows[r].size();
  std::vector<Cell> cells;
  cells.reserve(offsets[n]);
  for (auto& row : rows) cells.insert(cells.end(), row.begin(), row.end());
  return WeightedSpace(std::move(offsets), std::move(cells));
}

std::vector<WordId> top_contexts(SparseView row, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  std::vector<Cell> sorted(row.begin(), row.end());
  const auto stronger = [](const Cell& a, const Cell& b) {
    return a.value != b.value ? a.value > b.value : a.feature < b.feature;
  };
  const std::size_t take = std::min(k, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end(), stronger);
  std::vector<WordId> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(sorted[i].feature);
  return out;
}

std::vector<WordId> top_contexts(const CountSpace& space, const WeightedSpace& wspace, std::string_view lemma,
                                 std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const auto id = space.vocab().find(lemma);
  if (!id) return {};
  return top_contexts(wspace.row(*id), k);
}

std::optional<double> entropy(SparseView v) {
  if (v.empty()) return std::nullopt;
  // Summing in value order makes rows with the same multiset of counts
  // produce bit-identical entropies, so exact ties stay ties.
  std::vector<double> values(v.size());
  std::transform(v.begin(), v.end(), values.begin(), [](const Cell& c) { return c.value; });
  std::sort(values.begin(), values.end());
  double mass = 0;
  for (double x : values) mass += x;
  double h = 0;
  for (double x : values) {
    const double p = x / mass;
    h -= p * std::log2(p);
  }
  // Rounding can leave -0 or a tiny negative for single-feature rows.
  return std::max(0.0, h);
}

std::optional<double> median(std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2;
}

EntropyTable::EntropyTable(const CountSpace& space, unsigned threads) : values_(space.size(), -1.0) {
  parallel_for(space.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      if (auto h = entropy(space.row(static_cast<WordId>(r)))) values_[r] = *h;
    }
  });
}

std::optional<double> second_order_entropy(const WeightedSpace& wspace, const EntropyTable& entropies, WordId word,
                                           std::size_t k) {
  std::vector<double> hs;
  for (WordId f : top_contexts(wspace.row(word), k)) {
    if (auto h = entropies[f]) hs.push_back(*h);
  }
  return median(hs);
}

std::optional<double> second_order_entropy(const CountSpace& space, const WeightedSpace& wspace,
                                           std::string_view lemma, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const auto id = space.vocab().find(lemma);
  if (!id) return std::nullopt;
  std::vector<double> hs;
  for (WordId f : top_contexts(wspace.row(*id), k)) {
    if (auto h = entropy(space.row(f))) hs.push_back(*h);
  }
  return median(hs);
}

}  // namespace hyperdir
