// Small CSV and number-formatting helpers shared by the persistence code.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace netfp::csv {

// Splits one line on commas. No quoting: none of the file formats used by
// this project embed commas in fields.
std::vector<std::string_view> split(std::string_view line);

// Splits text into lines, accepting both \n and \r\n, dropping a trailing
// blank line.
std::vector<std::string_view> lines(std::string_view text);

// Strict numeric parsers; `context` prefixes the error message.
double parse_double(std::string_view field, std::string_view context);
std::int64_t parse_int64(std::string_view field, std::string_view context);
std::uint64_t parse_uint64(std::string_view field, std::string_view context);

// Shortest round-trip-exact decimal form (17 significant digits max).
// All floating-point values written by this project go through here so
// that repeated runs produce byte-identical files.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace netfp::csv
