#pragma once

// Small CSV helpers shared by the file readers. Not part of the public API.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "touchmap/errors.hpp"

namespace touchmap::detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(fmt::format("{}:{}: expected a number, got '{}'", path.string(), line_no, field));
  return v;
}

inline std::int64_t parse_int(std::string_view field, const std::filesystem::path& path, std::size_t line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(fmt::format("{}:{}: expected an integer, got '{}'", path.string(), line_no, field));
  return v;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {} for reading", path.string()));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::ofstream open_for_writing(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  return out;
}

inline void finish_writing(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(fmt::format("failed writing {}", path.string()));
}

}  // namespace touchmap::detail
