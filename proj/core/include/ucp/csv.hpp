#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ucp {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Fixed-point text with `digits` decimals, for human-facing tables.
std::string format_fixed(double value, int digits);

// Splits one comma-separated line (no quoting; fields are trimmed).
std::vector<std::string> split_csv_line(std::string_view line);

// Strict full-string parses; return false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_int(std::string_view text, int& out);

}  // namespace ucp
