#include "mola/textio.hpp"

#include <charconv>
#include <istream>

#include "mola/errors.hpp"

namespace mola {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<KeyValueLine> read_key_values(std::istream& in) {
  std::vector<KeyValueLine> out;
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    out.push_back({std::move(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return out;
}

double parse_double_field(std::string_view text, std::string_view field) {
  text = trim(text);
  if (text.size() > 1 && text[0] == '+' && text[1] != '-' && text[1] != '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError("field '" + std::string(field) + "': not a number: '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_int_field(std::string_view text, std::string_view field) {
  text = trim(text);
  std::int64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError("field '" + std::string(field) + "': not an integer: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_uint_field(std::string_view text, std::string_view field) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ParseError("field '" + std::string(field) + "': not an unsigned integer: '" + std::string(text) + "'");
  return value;
}

bool parse_bool_field(std::string_view text, std::string_view field) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParseError("field '" + std::string(field) + "': not a boolean: '" + std::string(text) + "'");
}

std::vector<double> parse_double_list(std::string_view text, int line) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
    const std::string field = line > 0 ? "line " + std::to_string(line) : "list";
    out.push_back(parse_double_field(text.substr(i, j - i), field));
    i = j;
  }
  return out;
}

}  // namespace mola
