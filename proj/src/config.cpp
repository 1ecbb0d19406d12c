#include "hyperdir/config.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hyperdir/text.hpp"

namespace hyperdir {
namespace {

std::size_t parse_size(std::string_view v, std::string_view key) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument(fmt::format("{} expects a non-negative integer, got '{}'", key, v));
  }
  return out;
}

bool parse_bool(std::string_view v, std::string_view key) {
  const std::string l = text::to_lower(v);
  if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
  if (l == "0" || l == "false" || l == "no" || l == "off") return false;
  throw std::invalid_argument(fmt::format("{} expects a boolean, got '{}'", key, v));
}

std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  for (auto part : text::split(v, ',')) {
    part = text::trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (buckets < 1) throw std::invalid_argument("buckets must be at least 1");
  if (methods.empty()) throw std::invalid_argument("no methods selected");
  pos.validate();
}

void apply_config(std::istream& in, RunConfig& cfg, const std::string& name) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("{}:{}: expected key = value", name, line_no));
    }
    const std::string key = text::to_lower(text::trim(line.substr(0, eq)));
    const std::string_view value = text::trim(line.substr(eq + 1));
    try {
      if (key == "corpus") {
        for (auto& p : parse_list(value)) cfg.corpora.emplace_back(p);
      } else if (key == "gold") {
        for (auto& p : parse_list(value)) cfg.gold.emplace_back(p);
      } else if (key == "tagset") {
        const bool lowercase = cfg.pos.lowercase;
        cfg.pos = corpus::PosConfig::for_tagset(value);
        cfg.pos.lowercase = lowercase;
        cfg.tagset = std::string(value);
      } else if (key == "noun_prefixes") {
        cfg.pos.noun_prefixes = parse_list(value);
      } else if (key == "verb_prefixes") {
        cfg.pos.verb_prefixes = parse_list(value);
      } else if (key == "adj_prefixes") {
        cfg.pos.adj_prefixes = parse_list(value);
      } else if (key == "lowercase") {
        cfg.pos.lowercase = parse_bool(value, key);
      } else if (key == "window") {
        cfg.window = parse_size(value, key);
      } else if (key == "k") {
        cfg.k = parse_size(value, key);
      } else if (key == "buckets") {
        cfg.buckets = parse_size(value, key);
      } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(parse_size(value, key));
      } else if (key == "methods") {
        cfg.methods = parse_method_list(value);
      } else if (key == "space") {
        cfg.space = std::string(value);
      } else if (key == "out") {
        cfg.out = std::string(value);
      } else if (key == "write_pairs") {
        cfg.write_pairs = parse_bool(value, key);
      } else {
        throw std::invalid_argument(fmt::format("unknown key '{}'", key));
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("{}:{}: {}", name, line_no, e.what()));
    }
  }
}

void apply_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot open config file '{}'", path.string()));
  apply_config(in, cfg, path.string());
}

}  // namespace hyperdir
