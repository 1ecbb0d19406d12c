#include "hyperdir/methods.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hyperdir/text.hpp"

namespace hyperdir {

std::string_view to_string(MethodId m) {
  switch (m) {
    case MethodId::WordLength: return "WordLength";
    case MethodId::WordFrequency: return "WordFrequency";
    case MethodId::WeedsPrec: return "WeedsPrec";
    case MethodId::InvCL: return "InvCL";
    case MethodId::SlqsRow: return "SlqsRow";
    case MethodId::SlqsSec: return "SlqsSec";
  }
  return "?";
}

std::optional<MethodId> parse_method(std::string_view name) {
  for (MethodId m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<MethodId> parse_method_list(std::string_view list) {
  std::vector<MethodId> out;
  for (auto part : text::split(list, ',')) {
    part = text::trim(part);
    if (part.empty()) continue;
    auto m = parse_method(part);
    if (!m) throw std::invalid_argument(fmt::format("unknown method '{}'", part));
    if (std::find(out.begin(), out.end(), *m) != out.end()) {
      throw std::invalid_argument(fmt::format("method '{}' listed twice", part));
    }
    out.push_back(*m);
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::FirstIsHypernym: return "FirstIsHypernym";
    case Decision::SecondIsHypernym: return "SecondIsHypernym";
    case Decision::Tie: return "Tie";
  }
  return "?";
}

std::optional<Decision> parse_decision(std::string_view s) {
  for (Decision d : {Decision::FirstIsHypernym, Decision::SecondIsHypernym, Decision::Tie}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

Decision mirror(Decision d) {
  switch (d) {
    case Decision::FirstIsHypernym: return Decision::SecondIsHypernym;
    case Decision::SecondIsHypernym: return Decision::FirstIsHypernym;
    case Decision::Tie: return Decision::Tie;
  }
  return Decision::Tie;
}

namespace {

double mass(SparseView v) {
  double m = 0;
  for (const Cell& c : v) m += c.value;
  return m;
}

// Merge-join over the shared support of two rows.
template <typename Fn>
void for_shared(SparseView x, SparseView y, Fn&& fn) {
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (i->feature < j->feature) {
      ++i;
    } else if (j->feature < i->feature) {
      ++j;
    } else {
      fn(i->value, j->value);
      ++i;
      ++j;
    }
  }
}

// Word with the higher outgoing inclusion score is the hyponym.
Decision precision_decision(std::optional<double> s12, std::optional<double> s21) {
  if (!s12 || !s21 || *s12 == *s21) return Decision::Tie;
  return *s12 > *s21 ? Decision::SecondIsHypernym : Decision::FirstIsHypernym;
}

Verdict entropy_verdict(std::optional<double> hx, std::optional<double> hy) {
  if (!hx || !hy) return {Decision::Tie, std::nullopt};
  std::optional<double> score;
  if (*hy > 0) score = 1.0 - *hx / *hy;
  if (*hx < *hy) return {Decision::SecondIsHypernym, score};
  if (*hx > *hy) return {Decision::FirstIsHypernym, score};
  return {Decision::Tie, score};
}

std::optional<double> quotient_score(std::optional<double> hx, std::optional<double> hy) {
  if (!hx || !hy || !(*hy > 0)) return std::nullopt;
  return 1.0 - *hx / *hy;
}

}  // namespace

std::optional<double> weeds_prec(SparseView x, SparseView y) {
  if (x.empty()) return std::nullopt;
  double shared = 0;
  for_shared(x, y, [&](double xf, double) { shared += xf; });
  return shared / mass(x);
}

std::optional<double> cde(SparseView x, SparseView y) {
  if (x.empty()) return std::nullopt;
  double shared = 0;
  for_shared(x, y, [&](double xf, double yf) { shared += std::min(xf, yf); });
  return shared / mass(x);
}

std::optional<double> inv_cl(SparseView x, SparseView y) {
  const auto xy = cde(x, y);
  const auto yx = cde(y, x);
  if (!xy || !yx) return std::nullopt;
  return std::sqrt(std::max(0.0, *xy * (1.0 - *yx)));
}

Verdict slqs_row(std::optional<double> hx, std::optional<double> hy) { return entropy_verdict(hx, hy); }

Verdict slqs_sec(std::optional<double> ex, std::optional<double> ey) { return entropy_verdict(ex, ey); }

Decision baseline_length(std::string_view w1, std::string_view w2) {
  const auto l1 = text::char_length(w1);
  const auto l2 = text::char_length(w2);
  if (l1 == l2) return Decision::Tie;
  return l1 < l2 ? Decision::FirstIsHypernym : Decision::SecondIsHypernym;
}

Decision baseline_frequency(std::uint64_t f1, std::uint64_t f2) {
  if (f1 == f2) return Decision::Tie;
  return f1 > f2 ? Decision::FirstIsHypernym : Decision::SecondIsHypernym;
}

DirectionScorer::DirectionScorer(const CountSpace& space, const WeightedSpace& wspace, std::size_t k,
                                 unsigned threads)
    : space_(space), wspace_(wspace), k_(k), entropies_(space, threads) {
  if (k_ == 0) throw std::invalid_argument("k must be at least 1");
  if (wspace_.size() != space_.size()) throw std::invalid_argument("weighted space does not match count space");
}

std::optional<double> DirectionScorer::second_order_entropy(WordId id) const {
  {
    std::lock_guard lock(memo_mu_);
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
  }
  const auto e = hyperdir::second_order_entropy(wspace_, entropies_, id, k_);
  std::lock_guard lock(memo_mu_);
  memo_.emplace(id, e);
  return e;
}

ScoredPair DirectionScorer::decide(MethodId method, std::string_view w1, std::string_view w2) const {
  ScoredPair out{std::string(w1), std::string(w2), method, std::nullopt, std::nullopt, Decision::Tie, false};
  const auto id1 = space_.vocab().find(w1);
  const auto id2 = space_.vocab().find(w2);
  if (!id1 || !id2) {
    out.out_of_vocabulary = true;
    return out;
  }
  switch (method) {
    case MethodId::WordLength:
      out.score_12 = static_cast<double>(text::char_length(w1));
      out.score_21 = static_cast<double>(text::char_length(w2));
      out.decision = baseline_length(w1, w2);
      break;
    case MethodId::WordFrequency:
      out.score_12 = static_cast<double>(space_.freq(*id1));
      out.score_21 = static_cast<double>(space_.freq(*id2));
      out.decision = baseline_frequency(space_.freq(*id1), space_.freq(*id2));
      break;
    case MethodId::WeedsPrec:
      out.score_12 = weeds_prec(space_.row(*id1), space_.row(*id2));
      out.score_21 = weeds_prec(space_.row(*id2), space_.row(*id1));
      out.decision = precision_decision(out.score_12, out.score_21);
      break;
    case MethodId::InvCL:
      out.score_12 = inv_cl(space_.row(*id1), space_.row(*id2));
      out.score_21 = inv_cl(space_.row(*id2), space_.row(*id1));
      out.decision = precision_decision(out.score_12, out.score_21);
      break;
    case MethodId::SlqsRow:
    case MethodId::SlqsSec: {
      const bool row = method == MethodId::SlqsRow;
      const auto h1 = row ? entropies_[*id1] : second_order_entropy(*id1);
      const auto h2 = row ? entropies_[*id2] : second_order_entropy(*id2);
      const Verdict v = row ? slqs_row(h1, h2) : slqs_sec(h1, h2);
      out.score_12 = v.score;
      out.score_21 = quotient_score(h2, h1);
      out.decision = v.decision;
      break;
    }
  }
  return out;
}

ScoredPair decide(MethodId method, std::string_view w1, std::string_view w2, const CountSpace& space,
                  const WeightedSpace& wspace, std::size_t k) {
  return DirectionScorer(space, wspace, k).decide(method, w1, w2);
}

}  // namespace hyperdir
