// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dense_oracle.hpp"
#include "hyperdir/config.hpp"
#include "hyperdir/corpus.hpp"
#include "hyperdir/evaluation.hpp"
#include "hyperdir/gold.hpp"
#include "hyperdir/log.hpp"
#include "hyperdir/methods.hpp"
#include "hyperdir/pipeline.hpp"
#include "hyperdir/space.hpp"
#include "hyperdir/space_io.hpp"

namespace fs = std::filesystem;
using namespace hyperdir;

namespace {

const fs::path kFixtures = HYPERDIR_FIXTURE_DIR;

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

bool close(double a, long double b) { return std::fabs(static_cast<long double>(a) - b) <= 1e-9L; }

bool close(const std::optional<double>& a, const std::optional<oracle::Real>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || close(*a, *b);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / fmt::format("hyperdir-acceptance-{}", name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Random spaces

struct RandomSpace {
  oracle::Matrix counts;
  std::vector<std::string> lemmas;
  std::vector<std::uint64_t> freq;
};

// Distinct lemmas of varied length, sorted so ids follow byte order.
std::vector<std::string> random_lemmas(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> len(1, 6), letter('a', 'e');
  std::set<std::string> out;
  while (out.size() < n) {
    std::string s(static_cast<std::size_t>(len(rng)), 'a');
    for (char& c : s) c = static_cast<char>(letter(rng));
    out.insert(s);
  }
  return {out.begin(), out.end()};
}

RandomSpace random_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> words(1, 20), features(1, 30);
  std::uniform_int_distribution<std::uint64_t> count(1, 50), fdist(1, 40);
  std::uniform_real_distribution<double> density(0.05, 0.9), coin(0, 1);
  const std::size_t nw = words(rng), nf = features(rng), n = std::max(nw, nf);
  const double d = density(rng);
  RandomSpace r;
  r.lemmas = random_lemmas(rng, n);
  r.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t f = 0; f < nf; ++f)
      if (coin(rng) < d) r.counts[w][f] = count(rng);
  r.freq.resize(n);
  for (auto& f : r.freq) f = fdist(rng);
  return r;
}

CountSpace to_space(const RandomSpace& r) {
  std::vector<Triplet> t;
  for (std::size_t w = 0; w < r.counts.size(); ++w)
    for (std::size_t f = 0; f < r.counts.size(); ++f)
      if (r.counts[w][f] > 0) t.push_back({static_cast<WordId>(w), static_cast<WordId>(f), r.counts[w][f]});
  return CountSpace(Vocabulary(r.lemmas), r.freq, std::move(t));
}

void method_oracle_equivalence() {
  std::mt19937_64 rng(7001);
  std::uniform_int_distribution<std::size_t> kdist(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomSpace r = random_space(rng);
    const CountSpace space = to_space(r);
    const WeightedSpace w = plmi(space);
    const std::size_t k = trial % 5 == 0 ? 50 : kdist(rng);
    const DirectionScorer scorer(space, w, k);
    const auto ow = oracle::plmi(r.counts);
    const std::size_t n = r.counts.size();
    const auto where = [&](const std::string& what, std::size_t a, std::size_t b = 0) {
      return fmt::format("trial {} (k={}): {} at ({}, {})", trial, k, what, a, b);
    };

    for (std::size_t a = 0; a < n; ++a) {
      const SparseView row = space.row(static_cast<WordId>(a));
      expect(close(entropy(row), oracle::entropy(r.counts, a)), where("H", a));

      std::vector<oracle::Real> dense(n, 0);
      for (const Cell& c : w.row(static_cast<WordId>(a))) dense[c.feature] = c.value;
      for (std::size_t f = 0; f < n; ++f) {
        expect((dense[f] > 0) == (ow[a][f] > 0), where("PLMI support", a, f));
        expect(close(static_cast<double>(dense[f]), ow[a][f]), where("PLMI", a, f));
      }
      const auto top = top_contexts(w.row(static_cast<WordId>(a)), k);
      const auto otop = oracle::top_contexts(ow[a], k);
      expect(std::equal(top.begin(), top.end(), otop.begin(), otop.end()), where("top-k", a));
      expect(close(scorer.second_order_entropy(static_cast<WordId>(a)), oracle::second_order(r.counts, ow, a, k)),
             where("E", a));

      for (std::size_t b = 0; b < n; ++b) {
        const SparseView other = space.row(static_cast<WordId>(b));
        expect(close(weeds_prec(row, other), oracle::weeds_prec(r.counts, a, b)), where("WeedsPrec", a, b));
        expect(close(cde(row, other), oracle::cde(r.counts, a, b)), where("cde", a, b));
        expect(close(inv_cl(row, other), oracle::inv_cl(r.counts, a, b)), where("invCL", a, b));
        if (a == b) continue;

        const std::string& x = r.lemmas[a];
        const std::string& y = r.lemmas[b];
        using oracle::by_entropy;
        using oracle::by_score;
        const Decision want_weeds =
            by_score(oracle::weeds_prec(r.counts, a, b), oracle::weeds_prec(r.counts, b, a));
        const Decision want_invcl = by_score(oracle::inv_cl(r.counts, a, b), oracle::inv_cl(r.counts, b, a));
        const Decision want_row = by_entropy(oracle::entropy(r.counts, a), oracle::entropy(r.counts, b));
        const Decision want_sec =
            by_entropy(oracle::second_order(r.counts, ow, a, k), oracle::second_order(r.counts, ow, b, k));
        expect(scorer.decide(MethodId::WeedsPrec, x, y).decision == want_weeds, where("WeedsPrec decision", a, b));
        expect(scorer.decide(MethodId::InvCL, x, y).decision == want_invcl, where("InvCL decision", a, b));
        expect(scorer.decide(MethodId::SlqsRow, x, y).decision == want_row, where("SlqsRow decision", a, b));
        expect(scorer.decide(MethodId::SlqsSec, x, y).decision == want_sec, where("SlqsSec decision", a, b));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Counting

using CellMap = std::map<std::pair<std::string, std::string>, std::uint64_t>;

void counting_oracle() {
  std::mt19937_64 rng(7002);
  const std::vector<std::string> tags = {"NN", "NNS", "NP", "VVZ", "VB", "JJ", "JJR", "DT", "IN", "RB", "SENT"};
  const std::vector<std::string> lemmas = {"cat", "dog", "run", "big", "the", "of", "red", "eat", "ant", "zebra"};
  std::uniform_int_distribution<std::size_t> nsent(0, 50), ntok(0, 30), tag(0, tags.size() - 1),
      lem(0, lemmas.size() - 1), wdist(1, 12);
  const fs::path dir = scratch("counting");
  const corpus::PosConfig cfg = corpus::PosConfig::penn();

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t window = trial % 4 == 0 ? 10 : wdist(rng);
    std::vector<corpus::Sentence> sentences(nsent(rng));
    std::string text;
    for (auto& s : sentences) {
      s.tokens.resize(ntok(rng));
      text += "<s>\n";
      for (auto& t : s.tokens) {
        t.lemma = lemmas[lem(rng)];
        t.pos = tags[tag(rng)];
        t.surface = t.lemma;
        text += fmt::format("{}\t{}\t{}\n", t.surface, t.pos, t.lemma);
      }
      text += "</s>\n";
    }

    CellMap cells;
    std::map<std::string, std::uint64_t> freq;
    std::uint64_t total = 0;
    const auto content = [](const std::string& pos) {
      return pos.starts_with("N") || pos.starts_with("V") || pos.starts_with("J");
    };
    for (const auto& s : sentences) {
      const auto& t = s.tokens;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!content(t[i].pos)) continue;
        ++freq[t[i].lemma];
        for (std::size_t j = 0; j < t.size(); ++j) {
          const std::size_t dist = i > j ? i - j : j - i;
          if (i == j || dist > window || !content(t[j].pos)) continue;
          ++cells[{t[i].lemma, t[j].lemma}];
          ++total;
        }
      }
    }

    const CountSpace space = corpus::count_cooccurrences(sentences, cfg, window);
    const std::string at = fmt::format("corpus {} (window {})", trial, window);
    expect(space.vocab().size() == freq.size(), at + ": vocabulary size");
    expect(space.total() == total, at + ": N");
    expect(space.nnz() == cells.size(), at + ": cell count");
    for (const auto& [lemma, f] : freq) expect(space.freq(lemma) == f, at + ": frequency of " + lemma);
    for (const auto& [key, c] : cells) {
      const auto r = space.vocab().find(key.first), f = space.vocab().find(key.second);
      expect(r && f && space.count(*r, *f) == c, at + fmt::format(": cell ({}, {})", key.first, key.second));
    }

    const fs::path file = dir / fmt::format("c{}.vrt", trial);
    std::ofstream(file, std::ios::binary) << text;
    for (unsigned threads : {1u, 4u}) {
      expect(corpus::count_corpus_files({file}, cfg, window, threads) == space,
             at + fmt::format(": file path with {} threads", threads));
    }
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Fixture pipeline

const std::vector<std::string> kPinned = {
    "toy_gold.compound.accuracy.csv",       "toy_gold.compound.smc.csv",
    "toy_gold.compound.buckets.csv",        "toy_gold.compound.complementarity.csv",
    "toy_gold.compound.coverage.csv",       "toy_gold.noncompound.accuracy.csv",
    "toy_gold.noncompound.smc.csv",         "toy_gold.noncompound.buckets.csv",
    "toy_gold.noncompound.complementarity.csv", "toy_gold.noncompound.coverage.csv",
};

RunConfig fixture_config(const fs::path& dir, unsigned threads) {
  RunConfig cfg;
  cfg.corpora = {kFixtures / "toy_corpus.vrt.gz"};
  cfg.gold = {kFixtures / "toy_gold.tsv"};
  cfg.space = dir / "toy.hdsp";
  cfg.out = dir;
  cfg.threads = threads;
  return cfg;
}

void fixture_pipeline() {
  const fs::path dir = scratch("fixture");
  const RunConfig cfg = fixture_config(dir, 0);
  cmd_build_space(cfg);
  cmd_evaluate(cfg);
  for (const auto& name : kPinned) {
    expect(fs::exists(dir / name), name + " was not written");
    expect(slurp(dir / name) == slurp(kFixtures / "expected" / name), name + " differs from the pinned output");
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Invariants

Decision random_decision(std::mt19937_64& rng) {
  return static_cast<Decision>(std::uniform_int_distribution<int>(0, 2)(rng));
}

eval::DecisionTable random_table(std::mt19937_64& rng, std::size_t rows) {
  eval::DecisionTable t;
  t.methods.assign(kAllMethods.begin(), kAllMethods.end());
  std::uniform_int_distribution<std::uint64_t> f(1, 30);
  for (std::size_t i = 0; i < rows; ++i) {
    eval::DecisionRow r;
    r.pair = {fmt::format("h{}", i % 7), fmt::format("H{}", i % 5), "x", false};
    r.freq_hyponym = f(rng);
    r.freq_hypernym = f(rng);
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
      r.decisions.push_back(random_decision(rng));
      r.score_12.emplace_back();
      r.score_21.emplace_back();
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

std::vector<Decision> all_decisions(const DirectionScorer& s, const std::string& x, const std::string& y) {
  std::vector<Decision> out;
  for (MethodId m : kAllMethods) out.push_back(s.decide(m, x, y).decision);
  return out;
}

void invariants() {
  std::mt19937_64 rng(7004);

  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_table(rng, std::uniform_int_distribution<std::size_t>(1, 60)(rng));
    for (MethodId a : kAllMethods) {
      expect(eval::smc(t, a, a) == 1.0, "SMC diagonal");
      for (MethodId b : kAllMethods) expect(eval::smc(t, a, b) == eval::smc(t, b, a), "SMC symmetry");
    }
  }

  for (int trial = 0; trial < 300; ++trial) {
    RandomSpace r = random_space(rng);
    const CountSpace space = to_space(r);
    const WeightedSpace w = plmi(space);
    const DirectionScorer scorer(space, w, 5);
    std::vector<std::string> words = r.lemmas;
    words.push_back("zzzz-unseen");
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int p = 0; p < 20; ++p) {
      const std::string& x = words[pick(rng)];
      const std::string& y = words[pick(rng)];
      for (MethodId m : kAllMethods)
        expect(scorer.decide(m, y, x).decision == mirror(scorer.decide(m, x, y).decision),
               fmt::format("mirror equivariance of {} on ({}, {})", to_string(m), x, y));
    }

    // Whole-space scaling leaves every method's decisions unchanged.
    const std::uint64_t c = std::uniform_int_distribution<std::uint64_t>(2, 9)(rng);
    RandomSpace scaled = r;
    for (auto& row : scaled.counts)
      for (auto& v : row) v *= c;
    const CountSpace sspace = to_space(scaled);
    const WeightedSpace sw = plmi(sspace);
    const DirectionScorer sscorer(sspace, sw, 5);
    // Scaling a single row keeps the decisions that depend on that row only
    // through its proportions or support.
    RandomSpace one = r;
    const std::size_t target = pick(rng) % r.lemmas.size();
    for (auto& v : one.counts[target]) v *= c;
    const CountSpace ospace = to_space(one);
    const WeightedSpace ow = plmi(ospace);
    const DirectionScorer oscorer(ospace, ow, 5);
    for (std::size_t a = 0; a < r.lemmas.size(); ++a)
      for (std::size_t b = 0; b < r.lemmas.size(); ++b) {
        const auto& x = r.lemmas[a];
        const auto& y = r.lemmas[b];
        expect(all_decisions(scorer, x, y) == all_decisions(sscorer, x, y),
               fmt::format("decisions changed under scaling by {} on ({}, {})", c, x, y));
        for (MethodId m : {MethodId::WordLength, MethodId::WordFrequency, MethodId::WeedsPrec, MethodId::SlqsRow})
          expect(scorer.decide(m, x, y).decision == oscorer.decide(m, x, y).decision,
                 fmt::format("{} changed when scaling row {} by {}", to_string(m), r.lemmas[target], c));
      }
  }

  for (std::size_t rows = 1; rows <= 101; ++rows) {
    const auto t = random_table(rng, rows);
    const auto part = eval::frequency_buckets(t, 10);
    expect(part.buckets.size() == 10, fmt::format("{} rows: bucket count", rows));
    std::vector<int> seen(rows, 0);
    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < 10; ++b) {
      const std::size_t want = rows / 10 + (b < rows % 10 ? 1 : 0);
      expect(part.buckets[b].size() == want, fmt::format("{} rows: size of bucket {}", rows, b + 1));
      for (std::size_t i : part.buckets[b]) {
        expect(i < rows, fmt::format("{} rows: index out of range", rows));
        ++seen[i];
        order.push_back(i);
      }
    }
    expect(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }),
           fmt::format("{} rows: buckets do not partition the rows", rows));
    const auto diff = [&](std::size_t i) {
      return static_cast<std::int64_t>(t.rows[i].freq_hypernym) - static_cast<std::int64_t>(t.rows[i].freq_hyponym);
    };
    for (std::size_t i = 1; i < order.size(); ++i)
      expect(diff(order[i - 1]) >= diff(order[i]), fmt::format("{} rows: buckets not ordered by difference", rows));

    const auto per_bucket = eval::bucket_accuracies(t, part, t.methods);
    for (std::size_t m = 0; m < t.methods.size(); ++m) {
      const auto whole = eval::accuracy(t, t.methods[m]);
      std::uint64_t r = 0, ok = 0, bad = 0, ties = 0;
      for (const auto& bucket : per_bucket) {
        r += bucket[m].rows;
        ok += bucket[m].correct;
        bad += bucket[m].wrong;
        ties += bucket[m].ties;
      }
      expect(r == whole.rows && ok == whole.correct && bad == whole.wrong && ties == whole.ties,
             fmt::format("{} rows: bucket accuracies do not add up for {}", rows, to_string(t.methods[m])));
    }
  }
}

// ---------------------------------------------------------------------------
// Frequency correlation

void frequency_correlation() {
  const fs::path dir = scratch("correlation");
  RunConfig cfg = fixture_config(dir, 0);
  cmd_build_space(cfg);
  const CountSpace space = load_space_file(cfg.space);
  const WeightedSpace w = plmi(space);
  const DirectionScorer scorer(space, w, cfg.k);

  const auto pairs = gold::clean_pairs(gold::load_pairs(kFixtures / "toy_gold.tsv").pairs);
  const auto covered = gold::filter_coverage(pairs, space).kept;
  const auto more_frequent = std::count_if(covered.begin(), covered.end(), [&](const gold::GoldPair& p) {
    return space.freq(p.hypernym) > space.freq(p.hyponym);
  });
  const double share = static_cast<double>(more_frequent) / static_cast<double>(covered.size());
  expect(share >= 0.8, fmt::format("hypernym more frequent in only {:.3f} of pairs", share));

  const auto split = gold::split_compounds(pairs);
  const auto kept = gold::filter_coverage(split.non_compounds, space).kept;
  const std::vector<MethodId> methods(kAllMethods.begin(), kAllMethods.end());
  const auto table = eval::evaluate(kept, methods, scorer);
  const double baseline = *eval::smc(table, MethodId::WordFrequency, MethodId::WordLength);
  for (MethodId m : {MethodId::WeedsPrec, MethodId::InvCL, MethodId::SlqsRow}) {
    const double v = *eval::smc(table, MethodId::WordFrequency, m);
    expect(v > baseline, fmt::format("SMC(WordFrequency, {}) = {:.6f} does not exceed SMC(WordFrequency, "
                                     "WordLength) = {:.6f}",
                                     to_string(m), v, baseline));
  }
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// Determinism

void determinism() {
  const fs::path one = scratch("threads1"), eight = scratch("threads8");
  RunConfig a = fixture_config(one, 1), b = fixture_config(eight, 8);
  a.write_pairs = b.write_pairs = true;
  cmd_build_space(a);
  cmd_build_space(b);
  expect(slurp(a.space) == slurp(b.space), "space caches differ");
  const auto pa = cmd_evaluate(a);
  const auto pb = cmd_evaluate(b);
  expect(pa.size() == pb.size(), "different number of outputs");
  for (std::size_t i = 0; i < pa.size(); ++i) {
    expect(pa[i].filename() == pb[i].filename(), "output names differ");
    expect(slurp(pa[i]) == slurp(pb[i]), pa[i].filename().string() + " differs between 1 and 8 threads");
  }
  fs::remove_all(one);
  fs::remove_all(eight);
}

// ---------------------------------------------------------------------------
// Compound heuristic

void compound_heuristic() {
  expect(gold::is_compound("lapdog", "dog"), "(lapdog, dog) not classified compound");
  expect(gold::is_compound("selection", "election"), "(selection, election) not classified compound");
  const auto split = gold::split_compounds({{"lapdog", "dog", "x", false}, {"selection", "election", "x", false}});
  expect(split.compounds.size() == 2 && split.non_compounds.empty(), "split_compounds disagrees with is_compound");
}

}  // namespace

int main() {
  init_logging();
  if (!std::getenv("HYPERDIR_LOG")) spdlog::set_level(spdlog::level::err);

  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {"method-oracle equivalence on 1000 random spaces", 30, method_oracle_equivalence},
      {"counting oracle on 200 random corpora", 30, counting_oracle},
      {"fixture pipeline matches pinned outputs", 10, fixture_pipeline},
      {"invariant suite", 0, invariants},
      {"frequency-correlation property on the fixture", 0, frequency_correlation},
      {"determinism across 1 and 8 threads", 0, determinism},
      {"compound heuristic", 0, compound_heuristic},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.run();
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = fmt::format("exception: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && c.budget_seconds > 0 && secs >= c.budget_seconds)
      error = fmt::format("took {:.2f}s, limit {:.0f}s", secs, c.budget_seconds);
    if (error.empty()) {
      std::cout << fmt::format("[PASS] {} ({:.2f}s)\n", c.name, secs);
    } else {
      ++failed;
      std::cout << fmt::format("[FAIL] {} ({:.2f}s): {}\n", c.name, secs, error);
    }
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
