#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace urbanlra {

std::string_view trim(std::string_view s);

/// Removes a trailing '\r' left by CRLF files.
std::string_view strip_line(std::string_view s);

/// Splits one CSV row. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view row);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Strict decimal parse: the whole (trimmed) field must be consumed and finite.
bool parse_double(std::string_view s, double& out);
bool parse_size(std::string_view s, std::size_t& out);

/// Shortest round-trip decimal representation; "-0" is printed as "0".
std::string format_double(double v);

/// A CSV file held in memory: header fields plus data rows (with 1-based line numbers).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_csv(const std::filesystem::path& path);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace urbanlra
