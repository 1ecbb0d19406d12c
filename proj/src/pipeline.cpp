#include "hyperdir/pipeline.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hyperdir/csv.hpp"
#include "hyperdir/evaluation.hpp"
#include "hyperdir/gold.hpp"
#include "hyperdir/methods.hpp"
#include "hyperdir/space.hpp"
#include "hyperdir/space_io.hpp"

namespace hyperdir {

StageError::StageError(std::string stage, const std::string& what)
    : std::runtime_error(fmt::format("{}: {}", stage, what)), stage_(std::move(stage)) {}

namespace {

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void ensure_out_dir(const std::filesystem::path& dir) {
  stage("prepare output", [&] {
    std::filesystem::create_directories(dir);
    return 0;
  });
}

std::filesystem::path derived_name(const std::filesystem::path& decisions, const RunConfig& cfg,
                                   std::string_view kind) {
  std::string name = decisions.filename().string();
  const std::string marker = "decisions";
  const auto pos = name.rfind(marker);
  if (pos != std::string::npos) {
    name.replace(pos, marker.size(), kind);
  } else {
    name = fmt::format("{}.{}.csv", decisions.stem().string(), kind);
  }
  return cfg.out / name;
}

std::vector<MethodId> methods_for(const eval::DecisionTable& table, const RunConfig& cfg) {
  std::vector<MethodId> out;
  for (MethodId m : cfg.methods) {
    if (std::find(table.methods.begin(), table.methods.end(), m) != table.methods.end()) out.push_back(m);
  }
  return out;
}

std::string pairs_tsv(const std::vector<gold::GoldPair>& pairs, const gold::CoverageResult& coverage) {
  std::string out = "hyponym\thypernym\tflags\n";
  const auto contains = [](const std::vector<gold::GoldPair>& v, const gold::GoldPair& p) {
    return std::find(v.begin(), v.end(), p) != v.end();
  };
  for (const auto& p : pairs) {
    const char* status = contains(coverage.kept, p) ? "kept" : contains(coverage.empty_row, p) ? "empty_row" : "oov";
    out += fmt::format("{}\t{}\t{},{}\n", p.hyponym, p.hypernym, p.is_compound ? "compound" : "noncompound", status);
  }
  return out;
}

}  // namespace

std::string format_summary(const BuildSummary& s) {
  return fmt::format("sentences={} tokens={} content_tokens={} parse_errors={} invalid_utf8={} vocab={} cells={} N={}",
                     s.stats.sentences_read, s.stats.tokens_read, s.stats.content_tokens, s.stats.parse_errors,
                     s.stats.invalid_utf8, s.vocab_size, s.cells, s.total);
}

BuildSummary cmd_build_space(const RunConfig& cfg) {
  stage("configuration", [&] {
    cfg.validate();
    if (cfg.corpora.empty()) throw std::invalid_argument("no corpus files given");
    if (cfg.space.empty()) throw std::invalid_argument("no output space path given (--space)");
    return 0;
  });
  BuildSummary summary;
  const CountSpace space = stage("count corpus", [&] {
    return corpus::count_corpus_files(cfg.corpora, cfg.pos, cfg.window, cfg.threads, &summary.stats);
  });
  summary.vocab_size = space.size();
  summary.cells = space.nnz();
  summary.total = space.total();
  stage("write space", [&] {
    if (cfg.space.has_parent_path()) std::filesystem::create_directories(cfg.space.parent_path());
    save_space_file(space, cfg.space);
    return 0;
  });
  spdlog::info("wrote {}: {}", cfg.space.string(), format_summary(summary));
  return summary;
}

std::vector<std::filesystem::path> cmd_evaluate(const RunConfig& cfg) {
  stage("configuration", [&] {
    cfg.validate();
    if (cfg.space.empty()) throw std::invalid_argument("no space cache given (--space)");
    if (cfg.gold.empty()) throw std::invalid_argument("no gold files given (--gold)");
    return 0;
  });
  ensure_out_dir(cfg.out);
  const CountSpace space = stage("load space", [&] { return load_space_file(cfg.space); });
  const WeightedSpace weighted = stage("weight space", [&] { return plmi(space, cfg.threads); });
  const DirectionScorer scorer = stage("prepare scorer", [&] { return DirectionScorer(space, weighted, cfg.k, cfg.threads); });

  std::vector<std::filesystem::path> written;
  const auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = cfg.out / name;
    stage("write output", [&] {
      eval::write_file(path, content);
      return 0;
    });
    written.push_back(path);
  };

  for (const auto& gold_path : cfg.gold) {
    const auto loaded = stage("load gold", [&] { return gold::load_pairs(gold_path); });
    const std::string dataset = gold_path.stem().string();
    if (loaded.skipped_short > 0) {
      spdlog::warn("{}: skipped {} rows with fewer than two columns", gold_path.string(), loaded.skipped_short);
    }
    const auto cleaned = stage("clean gold", [&] { return gold::clean_pairs(loaded.pairs); });
    const auto split = stage("split compounds", [&] { return gold::split_compounds(cleaned); });
    const std::pair<const char*, const std::vector<gold::GoldPair>*> subsets[] = {
        {"compound", &split.compounds}, {"noncompound", &split.non_compounds}};
    for (const auto& [subset, pairs] : subsets) {
      const auto coverage = stage("coverage filter", [&] { return gold::filter_coverage(*pairs, space); });
      const auto table = stage("decide", [&] { return eval::evaluate(coverage.kept, cfg.methods, scorer, cfg.threads); });
      const std::string prefix = fmt::format("{}.{}", dataset, subset);
      stage("analyse", [&] {
        std::vector<eval::AccuracyResult> acc;
        for (MethodId m : cfg.methods) acc.push_back(eval::accuracy(table, m));
        const auto partition = eval::frequency_buckets(table, cfg.buckets);
        emit(prefix + ".decisions.csv", eval::decisions_csv(table));
        emit(prefix + ".accuracy.csv", eval::accuracy_csv(acc));
        emit(prefix + ".smc.csv", eval::smc_csv(table, cfg.methods));
        emit(prefix + ".buckets.csv",
             eval::buckets_csv(eval::bucket_accuracies(table, partition, cfg.methods)));
        emit(prefix + ".complementarity.csv", eval::complementarity_csv(table, cfg.methods));
        emit(prefix + ".coverage.csv", eval::coverage_csv(subset, coverage.report));
        if (cfg.write_pairs) emit(prefix + ".pairs.tsv", pairs_tsv(*pairs, coverage));
        return 0;
      });
      spdlog::info("{}: {} of {} pairs kept ({} oov, {} empty rows)", prefix, coverage.report.kept,
                   coverage.report.total, coverage.report.dropped_oov, coverage.report.dropped_empty_row);
    }
  }
  return written;
}

std::filesystem::path cmd_smc(const std::filesystem::path& decisions, const RunConfig& cfg) {
  const auto table = stage("load decisions", [&] { return eval::read_decisions_csv(decisions); });
  ensure_out_dir(cfg.out);
  const auto path = derived_name(decisions, cfg, "smc");
  stage("write output", [&] {
    eval::write_file(path, eval::smc_csv(table, methods_for(table, cfg)));
    return 0;
  });
  return path;
}

std::filesystem::path cmd_buckets(const std::filesystem::path& decisions, const RunConfig& cfg) {
  const auto table = stage("load decisions", [&] { return eval::read_decisions_csv(decisions); });
  ensure_out_dir(cfg.out);
  const auto path = derived_name(decisions, cfg, "buckets");
  stage("analyse", [&] {
    const auto partition = eval::frequency_buckets(table, cfg.buckets);
    eval::write_file(path, eval::buckets_csv(eval::bucket_accuracies(table, partition, methods_for(table, cfg))));
    return 0;
  });
  return path;
}

std::filesystem::path cmd_complement(const std::filesystem::path& decisions, const RunConfig& cfg) {
  const auto table = stage("load decisions", [&] { return eval::read_decisions_csv(decisions); });
  ensure_out_dir(cfg.out);
  const auto path = derived_name(decisions, cfg, "complementarity");
  stage("write output", [&] {
    eval::write_file(path, eval::complementarity_csv(table, methods_for(table, cfg)));
    return 0;
  });
  return path;
}

}  // namespace hyperdir
