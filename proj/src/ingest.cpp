#include "kdebw/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>
#include <vector>

#include "kdebw/error.hpp"

namespace kdebw {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

double parse_finite(std::string_view text, std::size_t line) {
  const auto v = parse_number(text);
  if (!v) throw ParseError(line, "not a number: '" + std::string(trim(text)) + "'");
  if (!std::isfinite(*v)) throw ParseError(line, "non-finite value");
  return *v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::optional<std::size_t> as_index(std::string_view s) {
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return idx;
}

}  // namespace

Dataset ingest(std::istream& in, const InputSpec& spec) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> column = spec.format == InputFormat::csv ? as_index(spec.column) : 0;
  bool first_row = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (spec.format == InputFormat::lines) {
      values.push_back(parse_finite(line, line_no));
      continue;
    }

    const auto fields = split_fields(line);
    if (first_row) {
      first_row = false;
      if (!column) {
        const auto it = std::find(fields.begin(), fields.end(), spec.column);
        if (it == fields.end()) throw ParseError(line_no, "no column named '" + spec.column + "' in header");
        column = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      if (*column < fields.size() && !parse_number(fields[*column])) continue;  // header row
    }
    if (*column >= fields.size()) {
      throw ParseError(line_no, "missing column " + std::to_string(*column));
    }
    values.push_back(parse_finite(fields[*column], line_no));
  }
  if (values.size() < 2) {
    throw EmptyInputError("input has " + std::to_string(values.size()) + " value(s); need at least 2");
  }
  return Dataset(std::move(values));
}

Dataset ingest(const std::filesystem::path& path, const InputSpec& spec) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path.string() + "'");
  return ingest(in, spec);
}

}  // namespace kdebw
