#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dialkit::io {

// Fields are escaped so a value can never contain a raw tab or newline:
// backslash, tab, CR and LF become \\ \t \r \n.
std::string escape_field(std::string_view value);
std::string unescape_field(std::string_view value);

std::vector<std::string> split_tabs(std::string_view line);

// A columnar text table: optional leading "# ..." metadata lines, one header
// row, then data rows with the same number of fields.
struct TsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // unescaped values

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

TsvTable parse_tsv(std::string_view text, std::string_view origin);
TsvTable read_tsv(const std::filesystem::path& path);
std::string format_tsv(const TsvTable& table);

// Tab-separated configuration tables: '#' starts a comment line, blank lines
// are skipped, there is no header. Values are taken verbatim (no escaping).
std::vector<std::vector<std::string>> parse_config_table(std::string_view text);

// Shortest decimal form that reads back to the same double.
std::string format_number(double value);
// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);
// Whole-string parse; nullopt on junk, empty input or non-finite values.
std::optional<double> parse_number(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes through a sibling temp file and renames, creating parent dirs.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dialkit::io
