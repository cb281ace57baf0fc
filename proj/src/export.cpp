#include "fmh/export.hpp"

#include "fmh/error.hpp"
#include "fmh/text.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace fmh {

nlohmann::ordered_json to_json(const GarchFit& fit) {
    return {{"omega", fit.params.omega},   {"alpha", fit.params.alpha},
            {"beta", fit.params.beta},     {"loglik", fit.loglik},
            {"converged", fit.converged}, {"iterations", fit.iterations}};
}

nlohmann::ordered_json to_json(const ScalingFit& fit) {
    return {{"q", fit.q},
            {"hurst", fit.hurst},
            {"log_intercept", fit.log_intercept},
            {"r_squared", fit.r_squared},
            {"stderr_hurst", fit.stderr_hurst}};
}

nlohmann::ordered_json to_json(const LiquidityIndicators& indicators) {
    return {{"f0", indicators.f0},
            {"f_sigma", indicators.f_sigma},
            {"f_range", indicators.f_range},
            {"f_ratio", indicators.f_ratio}};
}

namespace {

std::string q_label(double q) { return "hurst_q" + format_double(q); }

// q values other than 2 that appear in the results, in ascending order.
std::vector<double> extra_qs(std::span<const WindowResult> results) {
    std::vector<double> qs;
    if (results.empty()) return qs;
    for (const auto& fit : results.front().fits) {
        if (fit.q != 2.0) qs.push_back(fit.q);
    }
    return qs;
}

double hurst_for(const WindowResult& result, double q) {
    for (const auto& fit : result.fits) {
        if (fit.q == q) return fit.hurst;
    }
    return std::nan("");
}

}  // namespace

nlohmann::ordered_json to_json(const WindowResult& result) {
    nlohmann::ordered_json j{{"date", format_date(result.date)},
                             {"hurst", result.hurst},
                             {"stderr_hurst", result.stderr_hurst},
                             {"r_squared", result.r_squared},
                             {"f0", result.indicators.f0},
                             {"f_sigma", result.indicators.f_sigma},
                             {"f_range", result.indicators.f_range},
                             {"f_ratio", result.indicators.f_ratio},
                             {"garch_converged", result.garch_converged}};
    for (const auto& fit : result.fits) {
        if (fit.q != 2.0) j[q_label(fit.q)] = fit.hurst;
    }
    return j;
}

nlohmann::ordered_json to_json(const RollingConfig& config) {
    return {{"window", config.window},
            {"step", config.step},
            {"s_min", config.s_min},
            {"s_max", config.s_max},
            {"q_set", config.q_set},
            {"detrend_order", config.detrend_order},
            {"garch_mode", to_string(config.garch_mode)},
            {"garch",
             {{"tolerance", config.garch.tolerance},
              {"max_iterations", config.garch.max_iterations},
              {"demean", config.garch.demean}}},
            {"stamp", to_string(config.stamp)},
            {"workers", config.workers}};
}

nlohmann::ordered_json to_json(const GeneratorSpec& spec) {
    nlohmann::ordered_json j{{"kind", to_string(spec.kind)}, {"n", spec.n}, {"seed", spec.seed}};
    switch (spec.kind) {
    case GeneratorKind::Fgn:
        j["hurst"] = spec.hurst;
        j["sigma"] = spec.sigma;
        break;
    case GeneratorKind::GaussianWhite:
        j["sigma"] = spec.sigma;
        break;
    case GeneratorKind::Garch:
        j["omega"] = spec.garch.omega;
        j["alpha"] = spec.garch.alpha;
        j["beta"] = spec.garch.beta;
        j["burn_in"] = spec.burn_in;
        break;
    }
    return j;
}

void write_fluctuation_csv(std::ostream& out, const FluctuationProfile& profile) {
    out << "s,F_q(s)\n";
    for (std::size_t i = 0; i < profile.size(); ++i) {
        out << profile.scales()[i] << ',' << format_double(profile.fq()[i]) << '\n';
    }
}

void write_variance_path_csv(std::ostream& out, std::span<const Date> dates,
                             std::span<const double> h) {
    write_series(out, dates, h, "h");
}

void write_rolling_csv(std::ostream& out, std::span<const WindowResult> results) {
    const auto qs = extra_qs(results);
    out << "date,hurst,stderr_hurst,r_squared,f0,f_sigma,f_range,f_ratio,garch_converged";
    for (double q : qs) out << ',' << q_label(q);
    out << '\n';
    for (const auto& r : results) {
        out << format_date(r.date) << ',' << format_double(r.hurst) << ','
            << format_double(r.stderr_hurst) << ',' << format_double(r.r_squared) << ','
            << format_double(r.indicators.f0) << ',' << format_double(r.indicators.f_sigma) << ','
            << format_double(r.indicators.f_range) << ',' << format_double(r.indicators.f_ratio)
            << ',' << (r.garch_converged ? "true" : "false");
        for (double q : qs) out << ',' << format_double(hurst_for(r, q));
        out << '\n';
    }
}

void write_rolling_jsonl(std::ostream& out, std::span<const WindowResult> results) {
    for (const auto& r : results) out << to_json(r).dump() << '\n';
}

std::vector<WindowResult> read_rolling_csv(std::istream& in, const std::string& source_name) {
    static const std::vector<std::string> required = {
        "date", "hurst", "stderr_hurst", "r_squared", "f0",
        "f_sigma", "f_range", "f_ratio", "garch_converged"};
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw InputError(source_name + ": empty rolling file");
    ++line_no;
    const auto header = split_csv_line(line);
    std::vector<std::size_t> column(required.size());
    for (std::size_t c = 0; c < required.size(); ++c) {
        std::size_t i = 0;
        while (i < header.size() && trim(header[i]) != required[c]) ++i;
        if (i == header.size()) {
            throw InputError(source_name + ": missing column '" + required[c] + "'");
        }
        column[c] = i;
    }

    std::vector<WindowResult> results;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = source_name + ": line " + std::to_string(line_no);
        if (fields.size() < header.size()) throw InputError(where + ": too few fields");
        auto number = [&](std::size_t c) {
            const auto v = parse_double(fields[column[c]]);
            if (!v) {
                throw InputError(where + ": bad number '" + fields[column[c]] + "' in column " +
                                 required[c]);
            }
            return *v;
        };
        WindowResult r;
        try {
            r.date = parse_date(trim(fields[column[0]]));
        } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
        }
        r.hurst = number(1);
        r.stderr_hurst = number(2);
        r.r_squared = number(3);
        r.indicators.f0 = number(4);
        r.indicators.f_sigma = number(5);
        r.indicators.f_range = number(6);
        r.indicators.f_ratio = number(7);
        r.log_intercept = std::log(r.indicators.f0);
        const auto flag = trim(fields[column[8]]);
        if (flag != "true" && flag != "false") {
            throw InputError(where + ": garch_converged must be true or false");
        }
        r.garch_converged = flag == "true";
        r.first = r.last = results.size();
        results.push_back(r);
    }
    return results;
}

}  // namespace fmh
