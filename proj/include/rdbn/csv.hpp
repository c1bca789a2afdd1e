#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rdbn::csv {

/// Shortest round-trip decimal rendering (std::to_chars).
std::string format(double x);

/// Whole-field double parse; throws ValidationError naming the line.
double parse_double(const std::string& field, int line_number, const std::string& what);

/// Empty field -> nullopt (missing value).
std::optional<double> parse_optional(const std::string& field, int line_number,
                                     const std::string& what);

long parse_long(const std::string& field, int line_number, const std::string& what);

std::vector<std::string> split_line(const std::string& line);

/// Splits text into rows of fields. Handles \r\n and a trailing newline.
std::vector<std::vector<std::string>> parse(const std::string& text);

std::string join(const std::vector<std::string>& fields);

}  // namespace rdbn::csv
