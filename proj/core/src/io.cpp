#include "fracstep/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace fracstep::io {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer.data(), end);
}

std::string format_significant(double value, int digits) {
  std::array<char, 64> buffer{};
  const int n = std::snprintf(buffer.data(), buffer.size(), "%.*g", digits, value);
  return std::string(buffer.data(), static_cast<std::size_t>(n));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CsvBuilder::CsvBuilder(std::vector<std::string> columns, std::string_view description)
    : width_(columns.size()) {
  text_ = "# columns=";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += columns[i];
  }
  if (!description.empty()) {
    text_ += "; ";
    text_ += description;
  }
  text_ += '\n';
}

void CsvBuilder::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvBuilder::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("CsvBuilder: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(delimiter, start);
    parts.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view text) {
  const auto t = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  const auto t = trim(text);
  long long value = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> values;
  if (trim(text).empty()) return values;
  for (const auto& part : split(text, ',')) values.push_back(parse_double(part));
  return values;
}

std::vector<double> parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("grid must look like a:b:n, got '" + std::string(text) + "'");
  const double a = parse_double(parts[0]);
  const double b = parse_double(parts[1]);
  const long long n = parse_integer(parts[2]);
  if (n < 1) throw std::invalid_argument("grid point count must be >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    grid.push_back(a);
    return grid;
  }
  for (long long i = 0; i < n; ++i) {
    // Weighted form hits simple interior points (e.g. 0.5 in 0:1:21) exactly.
    const auto k = static_cast<double>(i);
    const auto last = static_cast<double>(n - 1);
    grid.push_back(((last - k) * a + k * b) / last);
  }
  return grid;
}

}  // namespace fracstep::io
