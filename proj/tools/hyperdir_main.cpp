// hyperdir: build count spaces from vertical corpora and evaluate
// hypernymy direction measures against gold pair lists.
//
//   hyperdir build-space --corpus wiki.vrt.gz --tagset penn --space en.hdsp
//   hyperdir evaluate --space en.hdsp --gold wordnet.tsv --out results/
//   hyperdir smc --decisions results/wordnet.noncompound.decisions.csv --out results/

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "hyperdir/config.hpp"
#include "hyperdir/log.hpp"
#include "hyperdir/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> corpora;
  std::vector<std::string> gold;
  std::vector<std::string> decisions;
  std::optional<std::string> space;
  std::optional<std::string> out;
  std::optional<std::string> methods;
  std::optional<std::string> tagset;
  std::optional<std::size_t> window;
  std::optional<std::size_t> k;
  std::optional<std::size_t> buckets;
  std::optional<unsigned> threads;
  bool lowercase = false;
  bool write_pairs = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--methods", f.methods, "comma-separated method list");
  cmd->add_option("--buckets", f.buckets, "number of frequency-difference buckets");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

hyperdir::RunConfig resolve(const Flags& f) {
  hyperdir::RunConfig cfg;
  if (!f.config.empty()) hyperdir::apply_config_file(f.config, cfg);
  if (f.tagset) {
    const bool lowercase = cfg.pos.lowercase;
    cfg.pos = hyperdir::corpus::PosConfig::for_tagset(*f.tagset);
    cfg.pos.lowercase = lowercase;
    cfg.tagset = *f.tagset;
  }
  if (f.lowercase) cfg.pos.lowercase = true;
  for (const auto& c : f.corpora) cfg.corpora.emplace_back(c);
  for (const auto& g : f.gold) cfg.gold.emplace_back(g);
  if (f.space) cfg.space = *f.space;
  if (f.out) cfg.out = *f.out;
  if (f.methods) cfg.methods = hyperdir::parse_method_list(*f.methods);
  if (f.window) cfg.window = *f.window;
  if (f.k) cfg.k = *f.k;
  if (f.buckets) cfg.buckets = *f.buckets;
  if (f.threads) cfg.threads = *f.threads;
  if (f.write_pairs) cfg.write_pairs = true;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  hyperdir::init_logging();
  CLI::App app{"Hypernymy direction measures over count-based vector spaces"};
  app.require_subcommand(1);
  Flags f;

  auto* build = app.add_subcommand("build-space", "count a vertical corpus into a binary space cache");
  add_common(build, f);
  build->add_option("--corpus,corpus", f.corpora, "vertical corpus file(s), plain or gzip");
  build->add_option("--space", f.space, "output cache path");
  build->add_option("--tagset", f.tagset, "penn or stts");
  build->add_option("--window", f.window, "co-occurrence half-width in tokens");
  build->add_flag("--lowercase", f.lowercase, "lower-case lemmas");

  auto* evaluate = app.add_subcommand("evaluate", "score gold pairs and write all analyses");
  add_common(evaluate, f);
  evaluate->add_option("--space", f.space, "space cache path");
  evaluate->add_option("--gold", f.gold, "gold TSV file (repeatable)");
  evaluate->add_option("--k", f.k, "strongest contexts for second-order entropy");
  evaluate->add_flag("--write-pairs", f.write_pairs, "also write the split/coverage pair lists");

  std::vector<CLI::App*> derived;
  for (const char* name : {"smc", "buckets", "complement"}) {
    auto* cmd = app.add_subcommand(name, std::string("re-derive ") + name + " from a decisions CSV");
    add_common(cmd, f);
    cmd->add_option("--decisions,decisions", f.decisions, "decisions CSV written by evaluate")->required();
    derived.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const hyperdir::RunConfig cfg = resolve(f);
    if (build->parsed()) {
      std::cout << hyperdir::format_summary(hyperdir::cmd_build_space(cfg)) << "\n";
    } else if (evaluate->parsed()) {
      for (const auto& p : hyperdir::cmd_evaluate(cfg)) spdlog::info("wrote {}", p.string());
    } else {
      for (const auto& d : f.decisions) {
        std::filesystem::path p;
        if (derived[0]->parsed()) p = hyperdir::cmd_smc(d, cfg);
        if (derived[1]->parsed()) p = hyperdir::cmd_buckets(d, cfg);
        if (derived[2]->parsed()) p = hyperdir::cmd_complement(d, cfg);
        spdlog::info("wrote {}", p.string());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "hyperdir: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
