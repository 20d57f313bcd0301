#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace nlqk::io {

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_double(double value);

/// Rows of a numeric CSV with exactly `columns` fields. A first row that does
/// not parse as numbers is treated as a header and skipped.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t columns);

/// Writes to a sibling temporary file and renames it over `path`, so a failed
/// run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// "x,value" CSV body with a header row.
std::string xy_csv(std::span<const double> x, std::span<const double> values,
                   const std::string& value_header = "value");

}  // namespace nlqk::io
