#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "kdebw/plugin.hpp"

namespace kdebw {

enum class InputFormat { lines, csv };

struct InputSpec {
  InputFormat format = InputFormat::lines;
  /// CSV column: a header name, or a 0-based index. Ignored for `lines`.
  std::string column = "0";
};

/// Parses one number per line (blank lines skipped), or one column of a comma-separated
/// file whose first row may be a header. ParseError carries the 1-based line number;
/// EmptyInputError if fewer than two values remain.
[[nodiscard]] Dataset ingest(std::istream& in, const InputSpec& spec);
[[nodiscard]] Dataset ingest(const std::filesystem::path& path, const InputSpec& spec);

}  // namespace kdebw
