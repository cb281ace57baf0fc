#pragma once

#include "fmh/date.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fmh {

/// Dated closing levels of an index. Dates strictly increase and every value is
/// a finite positive number; the constructor enforces both.
class PriceSeries {
public:
    PriceSeries(std::vector<Date> dates, std::vector<double> values);

    /// Sorts rows by date; rejects duplicate dates.
    static PriceSeries from_unsorted(std::vector<Date> dates, std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Log returns stamped with the date of the later price of each pair.
struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Where the date and close live in an input CSV. An index, when set, wins
/// over the column name. The first row is always a header.
struct CsvLayout {
    std::string date_column = "date";
    std::string close_column = "close";
    std::optional<std::size_t> date_index;
    std::optional<std::size_t> close_index;
    char delimiter = ',';
};

/// Reads a price CSV. Errors (InputError) name the file and, for bad rows, the
/// 1-based line number.
PriceSeries load_prices(const std::filesystem::path& path, const CsvLayout& layout = {});
PriceSeries read_prices(std::istream& in, const CsvLayout& layout = {},
                        const std::string& source_name = "<stream>");

/// Writes "date,close" rows with shortest round-trip number formatting.
void write_prices(std::ostream& out, const PriceSeries& prices);
void save_prices(const std::filesystem::path& path, const PriceSeries& prices);

/// Writes any dated series in the same layout as price files.
void write_series(std::ostream& out, std::span<const Date> dates, std::span<const double> values,
                  const std::string& value_column);

ReturnSeries log_returns(const PriceSeries& prices);

/// Largest peak-to-trough loss, 1 - min(value / running max), over the rows
/// whose dates fall in [from, to]. The running maximum starts inside the range.
double max_drawdown(const PriceSeries& prices, const Date& from, const Date& to);
double max_drawdown(const PriceSeries& prices);

struct SummaryStatistics {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased (n - 1)
    double std_dev = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Moment statistics; skewness and kurtosis use the population (n) moments.
SummaryStatistics describe(std::span<const double> values);

}  // namespace fmh
