#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace excitran {

/// Fixed numeric format: 17 significant digits, '.' decimal point,
/// independent of the global locale. NaN prints as "nan", infinities as
/// "inf" / "-inf".
std::string format_double(double x);

/// A CSV document: a "# key=value" comment block, one header row, data rows.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render() const;
  /// Index of a header column; throws ValidationError when absent.
  std::size_t column(const std::string& name) const;
};

/// Parse text produced by `render` (RFC 4180 quoting, '#' comment lines
/// before the header).
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Write via a temporary file in the same directory and rename over the
/// target, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace excitran
