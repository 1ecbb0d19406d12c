#include "hyperdir/corpus.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <zlib.h>

#include "hyperdir/parallel.hpp"
#include "hyperdir/text.hpp"

namespace hyperdir::corpus {

std::string_view to_string(PosClass c) {
  switch (c) {
    case PosClass::Noun: return "noun";
    case PosClass::Verb: return "verb";
    case PosClass::Adjective: return "adj";
  }
  return "?";
}

PosConfig PosConfig::penn() { return {{"N"}, {"V"}, {"J"}, false}; }

PosConfig PosConfig::stts() { return {{"NN", "NE"}, {"V"}, {"ADJ"}, false}; }

PosConfig PosConfig::for_tagset(std::string_view name) {
  const std::string n = text::to_lower(name);
  if (n == "penn" || n == "en") return penn();
  if (n == "stts" || n == "de") return stts();
  throw std::invalid_argument(fmt::format("unknown tagset '{}' (expected penn or stts)", name));
}

void PosConfig::validate() const {
  const std::pair<const char*, const std::vector<std::string>*> classes[] = {
      {"noun", &noun_prefixes}, {"verb", &verb_prefixes}, {"adjective", &adj_prefixes}};
  for (const auto& [label, prefixes] : classes) {
    if (prefixes->empty()) throw std::invalid_argument(fmt::format("no {} tag prefixes configured", label));
    for (const auto& p : *prefixes) {
      if (p.empty()) throw std::invalid_argument(fmt::format("empty {} tag prefix", label));
    }
  }
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      for (const auto& p : *classes[a].second) {
        if (std::find(classes[b].second->begin(), classes[b].second->end(), p) != classes[b].second->end()) {
          throw std::invalid_argument(
              fmt::format("tag prefix '{}' listed for both {} and {}", p, classes[a].first, classes[b].first));
        }
      }
    }
  }
}

std::optional<PosClass> PosConfig::classify(std::string_view pos) const {
  std::optional<PosClass> best;
  std::size_t best_len = 0;
  const auto scan = [&](const std::vector<std::string>& prefixes, PosClass c) {
    for (const auto& p : prefixes) {
      if (p.size() > best_len && pos.starts_with(p)) {
        best = c;
        best_len = p.size();
      }
    }
  };
  scan(noun_prefixes, PosClass::Noun);
  scan(verb_prefixes, PosClass::Verb);
  scan(adj_prefixes, PosClass::Adjective);
  return best;
}

IngestStats& IngestStats::operator+=(const IngestStats& o) {
  sentences_read += o.sentences_read;
  tokens_read += o.tokens_read;
  content_tokens += o.content_tokens;
  parse_errors += o.parse_errors;
  invalid_utf8 += o.invalid_utf8;
  return *this;
}

// ---------------------------------------------------------------------------
// Line sources

FileLineSource::FileLineSource(const std::filesystem::path& path) : path_(path), buf_(1 << 16) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError(fmt::format("cannot read corpus '{}': not a readable file", path.string()));
  }
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError(fmt::format("cannot open corpus '{}'", path.string()));
  gzbuffer(f, 1 << 17);
  handle_ = f;
}

FileLineSource::~FileLineSource() {
  if (handle_ != nullptr) gzclose(static_cast<gzFile>(handle_));
}

bool FileLineSource::next_line(std::string& line) {
  line.clear();
  while (true) {
    const char* start = buf_.data() + begin_;
    const char* nl = static_cast<const char*>(std::memchr(start, '\n', end_ - begin_));
    if (nl != nullptr) {
      line.append(start, nl);
      begin_ = static_cast<std::size_t>(nl - buf_.data()) + 1;
      return true;
    }
    line.append(start, static_cast<std::size_t>(buf_.data() + end_ - start));
    begin_ = end_ = 0;
    if (eof_) return !line.empty();
    const int n = gzread(static_cast<gzFile>(handle_), buf_.data(), static_cast<unsigned>(buf_.size()));
    if (n < 0) {
      int err = 0;
      const char* msg = gzerror(static_cast<gzFile>(handle_), &err);
      throw IoError(fmt::format("read error in '{}': {}", path_.string(), msg ? msg : "unknown"));
    }
    if (n == 0) eof_ = true;
    end_ = static_cast<std::size_t>(n);
  }
}

bool StreamLineSource::next_line(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError(fmt::format("read error in '{}'", name_));
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Vertical format

namespace {

bool is_structural(std::string_view line) {
  return line.size() >= 2 && line.front() == '<' && line.back() == '>' && line.find('\t') == std::string_view::npos;
}

}  // namespace

VerticalReader::VerticalReader(std::unique_ptr<LineSource> source) : source_(std::move(source)) {}

Sentence VerticalReader::take() {
  ++stats_.sentences_read;
  open_ = false;
  Sentence s = std::move(current_);
  current_ = Sentence{};
  return s;
}

std::optional<Sentence> VerticalReader::next() {
  if (done_) return std::nullopt;
  while (source_->next_line(line_)) {
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (!text::is_valid_utf8(line_)) {
      std::size_t replaced = 0;
      line_ = text::sanitize_utf8(line_, &replaced);
      stats_.invalid_utf8 += replaced;
    }
    const std::string_view l = line_;
    if (l.empty()) continue;
    if (is_structural(l)) {
      const bool pending = open_ || !current_.tokens.empty();
      if (l == "<s>" || l.starts_with("<s ")) {
        if (pending) {
          Sentence s = take();
          open_ = true;
          return s;
        }
        open_ = true;
      } else if (l == "</s>" && pending) {
        return take();
      }
      continue;
    }
    const auto fields = text::split(l, '\t');
    if (fields.size() != 3 || fields[1].empty() || fields[2].empty()) {
      ++stats_.parse_errors;
      spdlog::debug("{}:{}: malformed token line skipped", source_->name(), line_no_);
      continue;
    }
    ++stats_.tokens_read;
    current_.tokens.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2])});
  }
  done_ = true;
  if (open_ || !current_.tokens.empty()) return take();
  return std::nullopt;
}

std::vector<Sentence> parse_vertical(std::string_view text, IngestStats* stats) {
  std::istringstream in{std::string(text)};
  VerticalReader reader(std::make_unique<StreamLineSource>(in, "<memory>"));
  std::vector<Sentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  if (stats) *stats += reader.stats();
  return out;
}

std::vector<ContentToken> extract_content_tokens(const Sentence& s, const PosConfig& cfg) {
  std::vector<ContentToken> out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    if (auto c = cfg.classify(t.pos)) {
      out.push_back({i, cfg.lowercase ? text::to_lower(t.lemma) : t.lemma, *c});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting

namespace {

constexpr std::uint64_t pack(WordId a, WordId b) { return (std::uint64_t{a} << 32) | b; }

}  // namespace

CooccurrenceCounter::CooccurrenceCounter(PosConfig cfg, std::size_t window) : cfg_(std::move(cfg)), window_(window) {
  if (window_ == 0) throw std::invalid_argument("co-occurrence window must be at least 1");
}

WordId CooccurrenceCounter::intern(const std::string& lemma) {
  const WordId id = vocab_.intern(lemma);
  if (id == freq_.size()) freq_.push_back(0);
  return id;
}

void CooccurrenceCounter::add(const Sentence& s) {
  ids_.clear();
  positions_.clear();
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    if (!cfg_.classify(t.pos)) continue;
    const WordId id = cfg_.lowercase ? intern(text::to_lower(t.lemma)) : intern(t.lemma);
    ++freq_[id];
    ids_.push_back(id);
    positions_.push_back(i);
  }
  content_tokens_ += ids_.size();
  for (std::size_t a = 0; a < ids_.size(); ++a) {
    for (std::size_t b = a + 1; b < ids_.size() && positions_[b] - positions_[a] <= window_; ++b) {
      ++cells_[pack(ids_[a], ids_[b])];
      ++cells_[pack(ids_[b], ids_[a])];
    }
  }
}

void CooccurrenceCounter::merge(const CooccurrenceCounter& other) {
  std::vector<WordId> remap(other.vocab_.size());
  for (WordId i = 0; i < other.vocab_.size(); ++i) {
    remap[i] = intern(other.vocab_.lemma(i));
    freq_[remap[i]] += other.freq_[i];
  }
  for (const auto& [key, count] : other.cells_) {
    cells_[pack(remap[key >> 32], remap[key & 0xFFFFFFFFu])] += count;
  }
  content_tokens_ += other.content_tokens_;
}

CountSpace CooccurrenceCounter::finish() const {
  const std::size_t n = vocab_.size();
  std::vector<WordId> order(n);
  for (WordId i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](WordId a, WordId b) { return vocab_.lemma(a) < vocab_.lemma(b); });
  std::vector<WordId> rank(n);
  std::vector<std::string> lemmas;
  std::vector<std::uint64_t> freq;
  lemmas.reserve(n);
  freq.reserve(n);
  for (WordId r = 0; r < n; ++r) {
    rank[order[r]] = r;
    lemmas.push_back(vocab_.lemma(order[r]));
    freq.push_back(freq_[order[r]]);
  }
  std::vector<Triplet> triplets;
  triplets.reserve(cells_.size());
  for (const auto& [key, count] : cells_) {
    triplets.push_back({rank[key >> 32], rank[key & 0xFFFFFFFFu], count});
  }
  return CountSpace(Vocabulary(std::move(lemmas)), std::move(freq), std::move(triplets));
}

CountSpace count_cooccurrences(const std::vector<Sentence>& sentences, const PosConfig& cfg, std::size_t window) {
  CooccurrenceCounter counter(cfg, window);
  for (const auto& s : sentences) counter.add(s);
  return counter.finish();
}

namespace {

// Bounded single-producer / multi-consumer queue of sentence batches.
class BatchQueue {
 public:
  explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

  void push(std::vector<Sentence> batch) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_ || aborted_; });
    if (aborted_) return;
    queue_.push_back(std::move(batch));
    not_empty_.notify_one();
  }

  std::optional<std::vector<Sentence>> pop() {
    std::unique_lock lock(mu_);
    not_empty_.wait(lock, [&] { return !queue_.empty() || closed_ || aborted_; });
    if (aborted_ || queue_.empty()) return std::nullopt;
    auto batch = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return batch;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
  }

  void abort() {
    std::lock_guard lock(mu_);
    aborted_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<std::vector<Sentence>> queue_;
  bool closed_ = false;
  bool aborted_ = false;
};

constexpr std::size_t kBatchSize = 2048;

}  // namespace

CountSpace count_corpus_files(const std::vector<std::filesystem::path>& paths, const PosConfig& cfg,
                              std::size_t window, unsigned threads, IngestStats* stats) {
  cfg.validate();
  threads = resolve_threads(threads);
  std::vector<CooccurrenceCounter> counters(threads, CooccurrenceCounter(cfg, window));
  IngestStats read_stats;

  if (threads == 1) {
    for (const auto& path : paths) {
      VerticalReader reader(std::make_unique<FileLineSource>(path));
      while (auto s = reader.next()) counters[0].add(*s);
      read_stats += reader.stats();
    }
  } else {
    BatchQueue queue(2 * threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&queue, &counter = counters[t]] {
        while (auto batch = queue.pop()) {
          for (const auto& s : *batch) counter.add(s);
        }
      });
    }
    try {
      for (const auto& path : paths) {
        VerticalReader reader(std::make_unique<FileLineSource>(path));
        std::vector<Sentence> batch;
        batch.reserve(kBatchSize);
        while (auto s = reader.next()) {
          batch.push_back(std::move(*s));
          if (batch.size() == kBatchSize) {
            queue.push(std::move(batch));
            batch = {};
            batch.reserve(kBatchSize);
          }
        }
        if (!batch.empty()) queue.push(std::move(batch));
        read_stats += reader.stats();
      }
    } catch (...) {
      queue.abort();
      for (auto& w : workers) w.join();
      throw;
    }
    queue.close();
    for (auto& w : workers) w.join();
    for (unsigned t = 1; t < threads; ++t) counters[0].merge(counters[t]);
  }

  read_stats.content_tokens = counters[0].content_tokens();
  if (stats) *stats += read_stats;
  return counters[0].finish();
}

}  // namespace hyperdir::corpus
