#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperdir/space.hpp"

namespace hyperdir::corpus {

struct Token {
  std::string surface;
  std::string pos;
  std::string lemma;

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;

  bool operator==(const Sentence&) const = default;
};

enum class PosClass { Noun, Verb, Adjective };

std::string_view to_string(PosClass c);

/// Tag prefixes selecting content words, per word class.
struct PosConfig {
  std::vector<std::string> noun_prefixes;
  std::vector<std::string> verb_prefixes;
  std::vector<std::string> adj_prefixes;
  bool lowercase = false;

  /// Penn / English TreeTagger: N*, V*, J*.
  static PosConfig penn();
  /// STTS (German): NN, NE, V*, ADJ*.
  static PosConfig stts();
  /// "penn" / "en" or "stts" / "de"; throws std::invalid_argument otherwise.
  static PosConfig for_tagset(std::string_view name);

  /// Throws std::invalid_argument if a class has no prefix, a prefix is
  /// empty, or the same prefix is listed for two classes.
  void validate() const;

  /// Class of the longest matching prefix; absent for non-content tags.
  std::optional<PosClass> classify(std::string_view pos) const;
};

struct IngestStats {
  std::uint64_t sentences_read = 0;
  std::uint64_t tokens_read = 0;
  std::uint64_t content_tokens = 0;
  std::uint64_t parse_errors = 0;
  std::uint64_t invalid_utf8 = 0;

  IngestStats& operator+=(const IngestStats& o);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-oriented input. Lines are returned without the terminator.
class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool next_line(std::string& line) = 0;
  virtual std::string name() const = 0;
};

/// Reads a plain or gzip-compressed file (detected from the magic bytes).
class FileLineSource final : public LineSource {
 public:
  explicit FileLineSource(const std::filesystem::path& path);
  ~FileLineSource() override;
  FileLineSource(const FileLineSource&) = delete;
  FileLineSource& operator=(const FileLineSource&) = delete;

  bool next_line(std::string& line) override;
  std::string name() const override { return path_.string(); }

 private:
  std::filesystem::path path_;
  void* handle_ = nullptr;  // gzFile
  std::vector<char> buf_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
};

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in, std::string name = "<stream>") : in_(in), name_(std::move(name)) {}
  bool next_line(std::string& line) override;
  std::string name() const override { return name_; }

 private:
  std::istream& in_;
  std::string name_;
};

/// Streams sentences from vertical (one token per line) format:
/// `surface<TAB>pos<TAB>lemma`, with `<s>` / `</s>` sentence markers. Other
/// tag-like lines without tabs are structural and ignored. Token lines with
/// a field count other than three are skipped and counted; blank lines are
/// ignored; invalid UTF-8 is replaced with U+FFFD.
class VerticalReader {
 public:
  explicit VerticalReader(std::unique_ptr<LineSource> source);

  std::optional<Sentence> next();
  const IngestStats& stats() const { return stats_; }
  /// 1-based number of the last line read.
  std::uint64_t line_number() const { return line_no_; }

 private:
  Sentence take();

  std::unique_ptr<LineSource> source_;
  IngestStats stats_;
  std::uint64_t line_no_ = 0;
  std::string line_;
  Sentence current_;
  bool open_ = false;
  bool done_ = false;
};

/// Parses an in-memory vertical text completely.
std::vector<Sentence> parse_vertical(std::string_view text, IngestStats* stats = nullptr);

struct ContentToken {
  std::size_t position;  // index in the unfiltered sentence
  std::string lemma;
  PosClass pos_class;

  bool operator==(const ContentToken&) const = default;
};

std::vector<ContentToken> extract_content_tokens(const Sentence& s, const PosConfig& cfg);

/// Accumulates windowed co-occurrence counts and lemma frequencies. Each
/// counter interns lemmas locally; `merge` and `finish` make the result
/// independent of how sentences were split across counters.
class CooccurrenceCounter {
 public:
  CooccurrenceCounter(PosConfig cfg, std::size_t window);

  void add(const Sentence& s);
  void merge(const CooccurrenceCounter& other);
  std::uint64_t content_tokens() const { return content_tokens_; }

  /// Vocabulary ids of the returned space follow byte order of the lemmas.
  CountSpace finish() const;

 private:
  WordId intern(const std::string& lemma);

  PosConfig cfg_;
  std::size_t window_;
  Vocabulary vocab_;
  std::vector<std::uint64_t> freq_;
  std::unordered_map<std::uint64_t, std::uint64_t> cells_;
  std::uint64_t content_tokens_ = 0;
  std::vector<WordId> ids_;
  std::vector<std::size_t> positions_;
};

/// Single-threaded reference entry point over a sentence list.
CountSpace count_cooccurrences(const std::vector<Sentence>& sentences, const PosConfig& cfg, std::size_t window = 10);

/// Streams every file in order and counts with up to `threads` workers.
/// Throws IoError on unreadable input.
CountSpace count_corpus_files(const std::vector<std::filesystem::path>& paths, const PosConfig& cfg,
                              std::size_t window, unsigned threads, IngestStats* stats = nullptr);

}  // namespace hyperdir::corpus
