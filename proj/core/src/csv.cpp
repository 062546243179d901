#include "netfp/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace netfp::csv {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t nl = text.find('\n', begin);
    std::string_view line = nl == std::string_view::npos
                                ? text.substr(begin)
                                : text.substr(begin, nl - begin);
    if (line.ends_with('\r')) line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    begin = nl + 1;
  }
  return out;
}

namespace {

[[noreturn]] void fail(std::string_view context, std::string_view what,
                       std::string_view field) {
  throw std::runtime_error(std::string(context) + ": " + std::string(what) +
                           " '" + std::string(field) + "'");
}

}  // namespace

double parse_double(std::string_view field, std::string_view context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty())
    fail(context, "invalid number", field);
  return value;
}

std::int64_t parse_int64(std::string_view field, std::string_view context) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    fail(context, "invalid integer", field);
  return value;
}

std::uint64_t parse_uint64(std::string_view field, std::string_view context) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    fail(context, "invalid unsigned integer", field);
  return value;
}

std::string format_double(double value) {
  // Scientific form with exactly 17 significant digits: deterministic,
  // round-trip exact, and comfortably above the 12-digit floor the file
  // formats promise.
  char buf[40];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 16);
  if (ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read_file: read error on '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_file: cannot open '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write_file: write error on '" + path + "'");
}

}  // namespace netfp::csv
