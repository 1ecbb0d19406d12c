#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hyperdir::csv {

/// Quotes a field if it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Joins escaped fields with commas and terminates the record with "\n".
std::string record(const std::vector<std::string>& fields);

/// Fixed six-decimal rendering; absent values become an empty field.
std::string number(std::optional<double> v);

/// Reads one RFC 4180 record (quoted fields may span lines). Returns false
/// at end of input. Throws std::runtime_error on an unterminated quote.
bool read_record(std::istream& in, std::vector<std::string>& fields);

}  // namespace hyperdir::csv
