#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sgotto {

/// Round-trip decimal form: 17 significant digits, "nan", "inf", "-inf".
std::string format_double(double v);

/// Parses the output of format_double (and any strtod-compatible number).
double parse_double(std::string_view text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws InvalidArgument if absent.
  std::size_t column(std::string_view name) const;
};

/// One header line, comma-separated, '\n' line endings. Cells must not
/// contain commas or newlines.
std::string to_csv(const Table& table);

Table parse_csv(std::string_view text);

Table read_csv(const std::filesystem::path& path);

/// Writes atomically enough for our purposes; throws IoError naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

}  // namespace sgotto
