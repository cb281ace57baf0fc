#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace fmh {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws InputError.
Date parse_date(std::string_view text);

std::string format_date(const Date& date);

/// Returns the next Monday-to-Friday date after `date`.
Date next_weekday(const Date& date);

}  // namespace fmh
