#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fmh {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict full-field parse; surrounding blanks are allowed, anything else is not.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

/// Splits one CSV record on `delimiter`. Fields may be double-quoted.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

}  // namespace fmh
