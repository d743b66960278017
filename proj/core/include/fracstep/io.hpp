#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fracstep::io {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

/// Fixed number of significant digits ("%.*g").
std::string format_significant(double value, int digits);

/// Writes to `<path>.tmp` and renames over `path`, so readers never see a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// CSV text with a single leading "# columns=...; <description>" line.
class CsvBuilder {
 public:
  CsvBuilder(std::vector<std::string> columns, std::string_view description);

  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);

  const std::string& str() const noexcept { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

/// Parses "a:b:n" into n evenly spaced values from a to b inclusive
/// (n = 1 gives {a}). Throws std::invalid_argument on malformed input.
std::vector<double> parse_grid(std::string_view text);

/// Parses a comma-separated list of doubles.
std::vector<double> parse_double_list(std::string_view text);

/// Strict double parse: the whole (trimmed) string must be consumed.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text) noexcept;
std::vector<std::string> split(std::string_view text, char delimiter);

}  // namespace fracstep::io
