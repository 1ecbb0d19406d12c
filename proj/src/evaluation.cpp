#include "hyperdir/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hyperdir/csv.hpp"
#include "hyperdir/parallel.hpp"

namespace hyperdir::eval {

std::size_t DecisionTable::column(MethodId m) const {
  auto it = std::find(methods.begin(), methods.end(), m);
  if (it == methods.end()) throw std::invalid_argument(fmt::format("method {} not in decision table", to_string(m)));
  return static_cast<std::size_t>(it - methods.begin());
}

DecisionTable evaluate(const std::vector<gold::GoldPair>& pairs, const std::vector<MethodId>& methods,
                       const DirectionScorer& scorer, unsigned threads) {
  DecisionTable table;
  table.methods = methods;
  table.rows.resize(pairs.size());
  const CountSpace& space = scorer.space();
  parallel_for(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      DecisionRow& row = table.rows[i];
      row.pair = pairs[i];
      row.freq_hyponym = space.freq(pairs[i].hyponym);
      row.freq_hypernym = space.freq(pairs[i].hypernym);
      for (MethodId m : methods) {
        const ScoredPair s = scorer.decide(m, pairs[i].hyponym, pairs[i].hypernym);
        row.decisions.push_back(s.decision);
        row.score_12.push_back(s.score_12);
        row.score_21.push_back(s.score_21);
      }
    }
  });
  return table;
}

AccuracyResult accuracy(const DecisionTable& table, MethodId method, std::span<const std::size_t> rows) {
  const std::size_t col = table.column(method);
  AccuracyResult r;
  r.method = method;
  for (std::size_t i : rows) {
    const Decision d = table.rows.at(i).decisions[col];
    if (d == Decision::Tie) {
      ++r.ties;
    } else if (is_correct(d)) {
      ++r.correct;
    } else {
      ++r.wrong;
    }
  }
  r.rows = rows.size();
  if (r.rows > 0) {
    const auto n = static_cast<double>(r.rows);
    r.accuracy_strict = static_cast<double>(r.correct) / n;
    r.accuracy_half = (static_cast<double>(r.correct) + static_cast<double>(r.ties) / 2) / n;
  }
  return r;
}

AccuracyResult accuracy(const DecisionTable& table, MethodId method) {
  std::vector<std::size_t> all(table.size());
  std::iota(all.begin(), all.end(), 0);
  return accuracy(table, method, all);
}

std::optional<double> smc(const DecisionTable& table, MethodId a, MethodId b) {
  const std::size_t ca = table.column(a);
  const std::size_t cb = table.column(b);
  if (table.rows.empty()) return std::nullopt;
  std::size_t same = 0;
  for (const auto& row : table.rows) same += row.decisions[ca] == row.decisions[cb];
  return static_cast<double>(same) / static_cast<double>(table.rows.size());
}

BucketPartition frequency_buckets(const DecisionTable& table, std::size_t n) {
  if (n == 0) throw std::invalid_argument("bucket count must be at least 1");
  const std::size_t rows = table.size();
  if (n > rows) spdlog::warn("{} buckets requested for {} rows; some buckets will be empty", n, rows);
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  const auto diff = [&](std::size_t i) {
    const auto& r = table.rows[i];
    // Two's-complement wrap is fine: frequencies are far below 2^63.
    return static_cast<std::int64_t>(r.freq_hypernym) - static_cast<std::int64_t>(r.freq_hyponym);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto da = diff(a);
    const auto db = diff(b);
    if (da != db) return da > db;
    const auto& pa = table.rows[a].pair;
    const auto& pb = table.rows[b].pair;
    if (pa.hyponym != pb.hyponym) return pa.hyponym < pb.hyponym;
    if (pa.hypernym != pb.hypernym) return pa.hypernym < pb.hypernym;
    return a < b;
  });
  BucketPartition p;
  p.buckets.resize(n);
  const std::size_t base = rows / n;
  const std::size_t extra = rows % n;
  std::size_t next = 0;
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    p.buckets[b].assign(order.begin() + static_cast<std::ptrdiff_t>(next),
                        order.begin() + static_cast<std::ptrdiff_t>(next + size));
    next += size;
  }
  return p;
}

std::vector<std::vector<AccuracyResult>> bucket_accuracies(const DecisionTable& table,
                                                           const BucketPartition& partition,
                                                           const std::vector<MethodId>& methods) {
  std::vector<std::vector<AccuracyResult>> out;
  out.reserve(partition.buckets.size());
  for (const auto& bucket : partition.buckets) {
    auto& per_method = out.emplace_back();
    for (MethodId m : methods) per_method.push_back(accuracy(table, m, bucket));
  }
  return out;
}

Complementarity complementarity_counts(const DecisionTable& table, MethodId a, MethodId b) {
  const std::size_t ca = table.column(a);
  const std::size_t cb = table.column(b);
  Complementarity c;
  c.first = a;
  c.second = b;
  for (const auto& row : table.rows) {
    if (is_correct(row.decisions[ca])) continue;
    ++c.first_incorrect;
    c.second_correct += is_correct(row.decisions[cb]);
  }
  if (c.first_incorrect > 0) {
    c.proportion = static_cast<double>(c.second_correct) / static_cast<double>(c.first_incorrect);
  }
  return c;
}

std::optional<double> complementarity(const DecisionTable& table, MethodId a, MethodId b) {
  return complementarity_counts(table, a, b).proportion;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> accuracy_fields(const AccuracyResult& r) {
  return {std::string(to_string(r.method)), std::to_string(r.rows),  std::to_string(r.correct),
          std::to_string(r.wrong),          std::to_string(r.ties),  csv::number(r.accuracy_strict),
          csv::number(r.accuracy_half)};
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("decision table line {}: '{}' is not a count", line, s));
  }
  return v;
}

std::optional<double> parse_score(const std::string& s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw std::runtime_error(fmt::format("decision table line {}: '{}' is not a number", line, s));
}

constexpr std::size_t kFixedColumns = 6;

}  // namespace

std::string decisions_csv(const DecisionTable& table) {
  std::vector<std::string> header = {"hyponym", "hypernym", "source", "compound", "freq_hyponym", "freq_hypernym"};
  for (MethodId m : table.methods) {
    header.emplace_back(to_string(m));
    header.push_back(fmt::format("{}_score12", to_string(m)));
    header.push_back(fmt::format("{}_score21", to_string(m)));
  }
  std::string out = csv::record(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> f = {row.pair.hyponym,
                                  row.pair.hypernym,
                                  row.pair.source,
                                  row.pair.is_compound ? "1" : "0",
                                  std::to_string(row.freq_hyponym),
                                  std::to_string(row.freq_hypernym)};
    for (std::size_t c = 0; c < table.methods.size(); ++c) {
      f.emplace_back(to_string(row.decisions[c]));
      f.push_back(csv::number(row.score_12[c]));
      f.push_back(csv::number(row.score_21[c]));
    }
    out += csv::record(f);
  }
  return out;
}

std::string accuracy_csv(const std::vector<AccuracyResult>& results) {
  std::string out = csv::record({"method", "rows", "correct", "wrong", "ties", "accuracy_strict", "accuracy_half"});
  for (const auto& r : results) out += csv::record(accuracy_fields(r));
  return out;
}

std::string smc_csv(const DecisionTable& table, const std::vector<MethodId>& methods) {
  std::vector<std::string> header = {"method"};
  for (MethodId m : methods) header.emplace_back(to_string(m));
  std::string out = csv::record(header);
  for (MethodId a : methods) {
    std::vector<std::string> f = {std::string(to_string(a))};
    for (MethodId b : methods) f.push_back(csv::number(smc(table, a, b)));
    out += csv::record(f);
  }
  return out;
}

std::string buckets_csv(const std::vector<std::vector<AccuracyResult>>& per_bucket) {
  std::string out =
      csv::record({"bucket", "method", "rows", "correct", "wrong", "ties", "accuracy_strict", "accuracy_half"});
  for (std::size_t b = 0; b < per_bucket.size(); ++b) {
    for (const auto& r : per_bucket[b]) {
      auto f = accuracy_fields(r);
      f.insert(f.begin(), std::to_string(b + 1));
      out += csv::record(f);
    }
  }
  return out;
}

std::string complementarity_csv(const DecisionTable& table, const std::vector<MethodId>& methods) {
  std::string out = csv::record({"wrong_method", "other_method", "wrong_rows", "other_correct", "proportion"});
  for (MethodId a : methods) {
    for (MethodId b : methods) {
      if (a == b) continue;
      const auto c = complementarity_counts(table, a, b);
      out += csv::record({std::string(to_string(a)), std::string(to_string(b)), std::to_string(c.first_incorrect),
                          std::to_string(c.second_correct), csv::number(c.proportion)});
    }
  }
  return out;
}

std::string coverage_csv(const std::string& subset, const gold::CoverageReport& report) {
  return csv::record({"subset", "total", "kept", "dropped_oov", "dropped_empty_row"}) +
         csv::record({subset, std::to_string(report.total), std::to_string(report.kept),
                      std::to_string(report.dropped_oov), std::to_string(report.dropped_empty_row)});
}

DecisionTable read_decisions_csv(std::istream& in) {
  DecisionTable table;
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields)) throw std::runtime_error("decision table is empty (no header)");
  const std::vector<std::string> fixed = {"hyponym", "hypernym", "source", "compound", "freq_hyponym", "freq_hypernym"};
  if (fields.size() < kFixedColumns || !std::equal(fixed.begin(), fixed.end(), fields.begin()) ||
      (fields.size() - kFixedColumns) % 3 != 0) {
    throw std::runtime_error("decision table header does not match the expected layout");
  }
  for (std::size_t c = kFixedColumns; c < fields.size(); c += 3) {
    auto m = parse_method(fields[c]);
    if (!m) throw std::runtime_error(fmt::format("decision table header: unknown method '{}'", fields[c]));
    table.methods.push_back(*m);
  }
  const std::size_t width = fields.size();
  std::size_t line = 1;
  while (csv::read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != width) {
      throw std::runtime_error(
          fmt::format("decision table line {}: expected {} fields, found {}", line, width, fields.size()));
    }
    DecisionRow row;
    row.pair = {fields[0], fields[1], fields[2], fields[3] == "1"};
    row.freq_hyponym = parse_count(fields[4], line);
    row.freq_hypernym = parse_count(fields[5], line);
    for (std::size_t c = kFixedColumns; c < width; c += 3) {
      auto d = parse_decision(fields[c]);
      if (!d) throw std::runtime_error(fmt::format("decision table line {}: unknown decision '{}'", line, fields[c]));
      row.decisions.push_back(*d);
      row.score_12.push_back(parse_score(fields[c + 1], line));
      row.score_21.push_back(parse_score(fields[c + 2], line));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

DecisionTable read_decisions_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open decision table '{}'", path.string()));
  return read_decisions_csv(in);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace hyperdir::eval
