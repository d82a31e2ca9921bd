#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mola {

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

struct KeyValueLine {
  std::string key;
  std::string value;
  int line = 0;
};

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
/// `[section]` headers prefix following keys as `section.key`.
std::vector<KeyValueLine> read_key_values(std::istream& in);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

double parse_double_field(std::string_view text, std::string_view field);
std::int64_t parse_int_field(std::string_view text, std::string_view field);
std::uint64_t parse_uint_field(std::string_view text, std::string_view field);
bool parse_bool_field(std::string_view text, std::string_view field);

/// Whitespace- or comma-separated reals.
std::vector<double> parse_double_list(std::string_view text, int line = 0);

}  // namespace mola
