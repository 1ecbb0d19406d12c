#include "hyperdir/space_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

namespace hyperdir {
namespace {

constexpr char kMagic[4] = {'H', 'D', 'S', 'P'};

template <typename T>
void put(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw CorruptionError(fmt::format("space cache truncated while reading {} (offset {}, need {} bytes, have {})",
                                        what, pos_, n, remaining()));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string save_space(const CountSpace& space) {
  std::string out;
  const std::uint64_t words = space.size();
  const std::uint64_t cells = space.nnz();
  out.reserve(24 + words * 24 + cells * 12);
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kSpaceFormatVersion);
  put<std::uint64_t>(out, words);
  put<std::uint64_t>(out, cells);
  for (const auto& lemma : space.vocab().lemmas()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(lemma.size()));
    out.append(lemma);
  }
  for (std::uint64_t f : space.frequencies()) put<std::uint64_t>(out, f);
  for (std::uint64_t o : space.offsets()) put<std::uint64_t>(out, o);
  for (const Cell& c : space.cells()) {
    put<std::uint32_t>(out, c.feature);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(c.value));
  }
  return out;
}

CountSpace load_space(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("not a space cache: missing HDSP magic number");
  }
  Reader in(bytes.substr(4));
  const auto version = in.get<std::uint32_t>("format version");
  if (version != kSpaceFormatVersion) {
    throw FormatError(
        fmt::format("unsupported space cache version: expected {}, found {}", kSpaceFormatVersion, version));
  }
  const auto words = in.get<std::uint64_t>("word count");
  const auto cells = in.get<std::uint64_t>("cell count");
  // Each word needs at least 4 + 8 + 8 bytes and each cell 12; reject absurd
  // headers before allocating.
  if (words > in.remaining() / 20 || cells > in.remaining() / 12) {
    throw CorruptionError(fmt::format("space cache header claims {} words and {} cells but only {} bytes follow",
                                      words, cells, in.remaining()));
  }
  std::vector<std::string> lemmas;
  lemmas.reserve(words);
  for (std::uint64_t i = 0; i < words; ++i) {
    const auto len = in.get<std::uint32_t>("lemma length");
    lemmas.emplace_back(in.take(len, "lemma"));
  }
  std::vector<std::uint64_t> freq(words);
  for (auto& f : freq) f = in.get<std::uint64_t>("frequency");
  std::vector<std::uint64_t> offsets(words + 1);
  for (auto& o : offsets) o = in.get<std::uint64_t>("row offset");
  std::vector<Cell> table(cells);
  for (auto& c : table) {
    c.feature = in.get<std::uint32_t>("feature id");
    c.value = static_cast<double>(in.get<std::uint64_t>("count"));
  }
  if (in.remaining() != 0) {
    throw CorruptionError(fmt::format("space cache has {} trailing bytes", in.remaining()));
  }
  try {
    return CountSpace::from_csr(Vocabulary(std::move(lemmas)), std::move(freq), std::move(offsets), std::move(table));
  } catch (const std::invalid_argument& e) {
    throw CorruptionError(fmt::format("space cache is inconsistent: {}", e.what()));
  }
}

void save_space_file(const CountSpace& space, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  const std::string bytes = save_space(space);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

CountSpace load_space_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open space cache '{}'", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_space(bytes);
}

}  // namespace hyperdir
