#include "hyperdir/gold.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hyperdir/text.hpp"

namespace hyperdir::gold {

LoadResult load_pairs(std::istream& in, const std::string& source, const LoadOptions& opts) {
  LoadResult out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view l = text::trim(line);
    if (l.empty() || l.front() == '#') continue;
    auto fields = text::split(l, '\t');
    if (fields.size() < 2) {
      ++out.skipped_short;
      spdlog::warn("{}:{}: fewer than two columns, skipped", source, line_no);
      continue;
    }
    if (fields.size() >= 3) {
      const std::string label = text::to_lower(text::trim(fields[2]));
      const bool accepted = std::any_of(opts.hypernymy_labels.begin(), opts.hypernymy_labels.end(),
                                        [&](const std::string& a) { return text::to_lower(a) == label; });
      if (!accepted) {
        ++out.skipped_relation;
        continue;
      }
    }
    out.pairs.push_back({std::string(text::trim(fields[0])), std::string(text::trim(fields[1])), source, false});
  }
  return out;
}

LoadResult load_pairs(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open gold file '{}'", path.string()));
  return load_pairs(in, path.stem().string(), opts);
}

std::vector<GoldPair> clean_pairs(const std::vector<GoldPair>& pairs) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<GoldPair> out;
  for (const auto& p : pairs) {
    if (p.hyponym == p.hypernym) continue;
    if (p.hyponym.find(' ') != std::string::npos || p.hypernym.find(' ') != std::string::npos) continue;
    if (!seen.emplace(p.hyponym, p.hypernym).second) continue;
    out.push_back(p);
  }
  return out;
}

bool is_compound(std::string_view a, std::string_view b) {
  const std::string la = text::to_lower(a);
  const std::string lb = text::to_lower(b);
  return la.find(lb) != std::string::npos || lb.find(la) != std::string::npos;
}

CompoundSplit split_compounds(const std::vector<GoldPair>& pairs) {
  CompoundSplit out;
  for (GoldPair p : pairs) {
    p.is_compound = is_compound(p.hyponym, p.hypernym);
    (p.is_compound ? out.compounds : out.non_compounds).push_back(std::move(p));
  }
  return out;
}

CoverageResult filter_coverage(const std::vector<GoldPair>& pairs, const CountSpace& space) {
  CoverageResult out;
  out.report.total = pairs.size();
  for (const auto& p : pairs) {
    const auto hypo = space.vocab().find(p.hyponym);
    const auto hyper = space.vocab().find(p.hypernym);
    if (!hypo || !hyper || space.freq(*hypo) == 0 || space.freq(*hyper) == 0) {
      ++out.report.dropped_oov;
    } else if (space.row(*hypo).empty() || space.row(*hyper).empty()) {
      ++out.report.dropped_empty_row;
      out.empty_row.push_back(p);
    } else {
      ++out.report.kept;
      out.kept.push_back(p);
    }
  }
  return out;
}

}  // namespace hyperdir::gold
