#include "fmh/rolling.hpp"

#include "fmh/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace fmh {

GarchMode parse_garch_mode(std::string_view name) {
    if (name == "whole-sample") return GarchMode::WholeSample;
    if (name == "per-window") return GarchMode::PerWindow;
    throw InputError("unknown garch mode '" + std::string(name) +
                     "' (expected whole-sample or per-window)");
}

std::string_view to_string(GarchMode mode) {
    return mode == GarchMode::WholeSample ? "whole-sample" : "per-window";
}

WindowStamp parse_window_stamp(std::string_view name) {
    if (name == "start") return WindowStamp::Start;
    if (name == "center") return WindowStamp::Center;
    if (name == "end") return WindowStamp::End;
    throw InputError("unknown window stamp '" + std::string(name) +
                     "' (expected start, center or end)");
}

std::string_view to_string(WindowStamp stamp) {
    switch (stamp) {
        case WindowStamp::Start: return "start";
        case WindowStamp::Center: return "center";
        case WindowStamp::End: return "end";
    }
    return "end";
}

void RollingConfig::validate() const {
    if (step < 1) throw InputError("rolling: step must be >= 1");
    if (detrend_order < 0) throw InputError("rolling: detrend order must be >= 0");
    if (s_min < static_cast<std::size_t>(detrend_order) + 2) {
        throw InputError("rolling: s_min must be >= detrend order + 2");
    }
    if (window < 10 * s_min) {
        throw InputError("rolling: window " + std::to_string(window) + " < 10 * s_min " +
                         std::to_string(10 * s_min));
    }
    if (s_max < s_min + 2) throw InputError("rolling: need at least 3 scales (s_max >= s_min + 2)");
    if (s_max > window / 4) {
        throw InputError("rolling: s_max " + std::to_string(s_max) + " > window / 4 = " +
                         std::to_string(window / 4));
    }
    if (std::find(q_set.begin(), q_set.end(), 2.0) == q_set.end()) {
        throw InputError("rolling: q_set must contain 2 (the liquidity measures use q = 2)");
    }
    for (double q : q_set) {
        if (q == 0.0 || !std::isfinite(q)) throw InputError("rolling: q must be finite and non-zero");
    }
}

MfdfaOptions RollingConfig::mfdfa_options() const {
    MfdfaOptions opts;
    opts.scales = scale_range(s_min, s_max);
    opts.qs = q_set;
    opts.order = detrend_order;
    return opts;
}

std::size_t window_count(std::size_t n, const RollingConfig& config) {
    if (config.step == 0) throw InputError("rolling: step must be >= 1");
    if (n < config.window) return 0;
    return (n - config.window) / config.step + 1;
}

WindowResult analyze_window(std::span<const double> values, const RollingConfig& config) {
    const auto per_q = mfdfa(values, config.mfdfa_options());
    WindowResult result;
    for (const auto& [q, r] : per_q) result.fits.push_back(r.fit);
    const MfdfaResult& main = per_q.at(2.0);
    result.hurst = main.fit.hurst;
    result.log_intercept = main.fit.log_intercept;
    result.r_squared = main.fit.r_squared;
    result.stderr_hurst = main.fit.stderr_hurst;
    result.indicators = liquidity_indicators(main.profile, main.fit);
    return result;
}

namespace {

std::size_t stamp_index(std::size_t first, std::size_t last, WindowStamp stamp) {
    switch (stamp) {
        case WindowStamp::Start: return first;
        case WindowStamp::Center: return first + (last - first) / 2;
        case WindowStamp::End: return last;
    }
    return last;
}

}  // namespace

std::vector<WindowResult> roll(const ReturnSeries& returns, const RollingConfig& config,
                               const ProgressCallback& progress) {
    config.validate();
    if (returns.dates.size() != returns.values.size()) {
        throw InputError("rolling: return dates and values differ in length");
    }
    if (returns.size() < config.window) {
        throw InputError("rolling: series of " + std::to_string(returns.size()) +
                         " returns is shorter than the window " + std::to_string(config.window));
    }
    const std::size_t count = window_count(returns.size(), config);

    std::vector<double> filtered;
    bool whole_converged = true;
    if (config.garch_mode == GarchMode::WholeSample) {
        const GarchFit fit = garch_fit(std::span<const double>(returns.values), config.garch);
        filtered = garch_filter(std::span<const double>(returns.values), fit);
        whole_converged = fit.converged;
    }

    auto run_window = [&](std::size_t k) {
        const std::size_t first = k * config.step;
        const std::size_t last = first + config.window - 1;
        WindowResult result;
        bool converged = whole_converged;
        if (config.garch_mode == GarchMode::WholeSample) {
            result = analyze_window(std::span<const double>(filtered).subspan(first, config.window),
                                    config);
        } else {
            const auto raw = std::span<const double>(returns.values).subspan(first, config.window);
            std::vector<double> local;
            try {
                const GarchFit fit = garch_fit(raw, config.garch);
                local = garch_filter(raw, fit);
                converged = fit.converged;
            } catch (const std::exception&) {
                local.assign(raw.begin(), raw.end());
                converged = false;
            }
            result = analyze_window(local, config);
        }
        result.first = first;
        result.last = last;
        result.date = returns.dates[stamp_index(first, last, config.stamp)];
        result.garch_converged = converged;
        return result;
    };

    std::vector<WindowResult> results(count);
    const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, count);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= count) return;
            try {
                results[k] = run_window(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, count);
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::string_view to_string(RegimeLabel label) {
    return label == RegimeLabel::Below ? "below" : "above";
}

std::vector<Regime> detect_regimes(std::span<const WindowResult> results, double threshold) {
    if (results.empty()) throw InputError("detect_regimes: no window results");
    std::vector<Regime> regimes;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const RegimeLabel label =
            results[i].hurst < threshold ? RegimeLabel::Below : RegimeLabel::Above;
        if (!regimes.empty() && regimes.back().label == label) {
            regimes.back().end = results[i].date;
            regimes.back().last_window = i;
        } else {
            regimes.push_back(Regime{results[i].date, results[i].date, i, i, label});
        }
    }
    return regimes;
}

}  // namespace fmh
