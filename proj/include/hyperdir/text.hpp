#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hyperdir::text {

/// Returns `in` with every ill-formed UTF-8 sequence replaced by U+FFFD.
/// `replaced` (if given) is incremented once per replacement.
std::string sanitize_utf8(std::string_view in, std::size_t* replaced = nullptr);

bool is_valid_utf8(std::string_view in);

/// Number of Unicode scalar values. Input is assumed to be valid UTF-8.
std::size_t char_length(std::string_view utf8);

/// Simple case folding: ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
/// Characters outside those blocks pass through unchanged.
std::string to_lower(std::string_view utf8);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace hyperdir::text
