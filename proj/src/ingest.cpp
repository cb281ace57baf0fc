#include "fmh/ingest.hpp"

#include "fmh/error.hpp"
#include "fmh/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

namespace fmh {

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw InputError("price series: " + std::to_string(dates_.size()) + " dates but " +
                         std::to_string(values_.size()) + " values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]) || values_[i] <= 0.0) {
            throw InputError("price series: non-positive price " + format_double(values_[i]) +
                             " on " + format_date(dates_[i]));
        }
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw InputError("price series: dates not strictly increasing at " +
                             format_date(dates_[i]));
        }
    }
}

PriceSeries PriceSeries::from_unsorted(std::vector<Date> dates, std::vector<double> values) {
    if (dates.size() != values.size()) {
        throw InputError("price series: date and value counts differ");
    }
    std::vector<std::size_t> order(dates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dates[a] < dates[b]; });
    std::vector<Date> sorted_dates;
    std::vector<double> sorted_values;
    sorted_dates.reserve(order.size());
    sorted_values.reserve(order.size());
    for (std::size_t idx : order) {
        if (!sorted_dates.empty() && sorted_dates.back() == dates[idx]) {
            throw InputError("price series: duplicate date " + format_date(dates[idx]));
        }
        sorted_dates.push_back(dates[idx]);
        sorted_values.push_back(values[idx]);
    }
    return PriceSeries(std::move(sorted_dates), std::move(sorted_values));
}

namespace {

std::size_t resolve_column(const std::vector<std::string>& header,
                           const std::optional<std::size_t>& index, const std::string& name,
                           const std::string& source) {
    if (index) {
        if (*index >= header.size()) {
            throw InputError(source + ": column index " + std::to_string(*index) +
                             " out of range (header has " + std::to_string(header.size()) +
                             " columns)");
        }
        return *index;
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw InputError(source + ": column '" + name + "' not found in header");
}

}  // namespace

PriceSeries read_prices(std::istream& in, const CsvLayout& layout, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            // Strip a UTF-8 byte order mark if present.
            if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
            header = split_csv_line(line, layout.delimiter);
            break;
        }
    }
    if (header.empty()) {
        throw InputError(source_name + ": empty file (no header row)");
    }
    const auto date_col = resolve_column(header, layout.date_index, layout.date_column, source_name);
    const auto close_col =
        resolve_column(header, layout.close_index, layout.close_column, source_name);

    std::vector<Date> dates;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line, layout.delimiter);
        const std::string where = source_name + ": line " + std::to_string(line_no);
        if (fields.size() <= std::max(date_col, close_col)) {
            throw InputError(where + ": expected at least " +
                             std::to_string(std::max(date_col, close_col) + 1) + " fields");
        }
        Date date;
        try {
            date = parse_date(trim(fields[date_col]));
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        const auto value = parse_double(fields[close_col]);
        if (!value || !std::isfinite(*value)) {
            throw InputError(where + ": unparsable price '" + fields[close_col] + "'");
        }
        if (*value <= 0.0) {
            throw InputError(where + ": non-positive price " + format_double(*value));
        }
        dates.push_back(date);
        values.push_back(*value);
    }
    try {
        return PriceSeries::from_unsorted(std::move(dates), std::move(values));
    } catch (const InputError& e) {
        throw InputError(source_name + ": " + e.what());
    }
}

PriceSeries load_prices(const std::filesystem::path& path, const CsvLayout& layout) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open price file '" + path.string() + "'");
    }
    return read_prices(in, layout, path.string());
}

void write_series(std::ostream& out, std::span<const Date> dates, std::span<const double> values,
                  const std::string& value_column) {
    if (dates.size() != values.size()) {
        throw InputError("write_series: date and value counts differ");
    }
    out << "date," << value_column << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << format_date(dates[i]) << ',' << format_double(values[i]) << '\n';
    }
}

void write_prices(std::ostream& out, const PriceSeries& prices) {
    write_series(out, prices.dates(), prices.values(), "close");
}

void save_prices(const std::filesystem::path& path, const PriceSeries& prices) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    write_prices(out, prices);
}

ReturnSeries log_returns(const PriceSeries& prices) {
    if (prices.size() < 2) {
        throw InputError("log_returns: need at least 2 prices, got " +
                         std::to_string(prices.size()));
    }
    const auto v = prices.values();
    const auto d = prices.dates();
    ReturnSeries out;
    out.dates.assign(d.begin() + 1, d.end());
    out.values.resize(v.size() - 1);
    for (std::size_t t = 0; t + 1 < v.size(); ++t) {
        out.values[t] = std::log(v[t + 1] / v[t]);
    }
    return out;
}

double max_drawdown(const PriceSeries& prices, const Date& from, const Date& to) {
    const auto d = prices.dates();
    const auto v = prices.values();
    double peak = 0.0;
    double worst = 1.0;  // min of value / running peak
    std::size_t rows = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (d[i] < from || to < d[i]) continue;
        ++rows;
        peak = std::max(peak, v[i]);
        worst = std::min(worst, v[i] / peak);
    }
    if (rows == 0) {
        throw InputError("max_drawdown: no prices between " + format_date(from) + " and " +
                         format_date(to));
    }
    return 1.0 - worst;
}

double max_drawdown(const PriceSeries& prices) {
    if (prices.size() == 0) throw InputError("max_drawdown: empty series");
    return max_drawdown(prices, prices.dates().front(), prices.dates().back());
}

SummaryStatistics describe(std::span<const double> values) {
    SummaryStatistics s;
    s.count = values.size();
    if (values.empty()) throw InputError("describe: empty series");
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double x : values) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    s.variance = values.size() > 1 ? m2 / (n - 1.0) : 0.0;
    s.std_dev = std::sqrt(s.variance);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return s;
}

}  // namespace fmh
