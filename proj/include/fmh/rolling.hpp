#pragma once

#include "fmh/garch.hpp"
#include "fmh/ingest.hpp"
#include "fmh/liquidity.hpp"
#include "fmh/scaling.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace fmh {

/// whole-sample: one GARCH fit over the full return series, windows slice the
/// filtered series. per-window: every window is fitted and filtered on its own.
enum class GarchMode { WholeSample, PerWindow };

/// Which date of the window a result is stamped with.
enum class WindowStamp { Start, Center, End };

GarchMode parse_garch_mode(std::string_view name);
std::string_view to_string(GarchMode mode);
WindowStamp parse_window_stamp(std::string_view name);
std::string_view to_string(WindowStamp stamp);

struct RollingConfig {
    std::size_t window = 500;
    std::size_t step = 1;
    std::size_t s_min = 10;
    std::size_t s_max = 50;
    std::vector<double> q_set = {2.0};
    int detrend_order = 1;
    GarchMode garch_mode = GarchMode::WholeSample;
    GarchOptions garch;
    WindowStamp stamp = WindowStamp::End;
    /// Worker threads for window evaluation; results do not depend on it.
    std::size_t workers = 1;

    /// Requires step >= 1, window >= 10 * s_min, s_min + 2 <= s_max <= window / 4,
    /// s_min >= detrend_order + 2 and q = 2 in q_set.
    void validate() const;
    [[nodiscard]] MfdfaOptions mfdfa_options() const;
};

struct WindowResult {
    Date date;
    std::size_t first = 0;  // index range [first, last] into the return series
    std::size_t last = 0;
    double hurst = 0.0;  // H(2)
    double log_intercept = 0.0;
    double r_squared = 0.0;
    double stderr_hurst = 0.0;
    LiquidityIndicators indicators;
    bool garch_converged = true;
    std::vector<ScalingFit> fits;  // one per q in the config's q_set, ascending q
};

/// Number of windows: floor((n - window) / step) + 1.
std::size_t window_count(std::size_t n, const RollingConfig& config);

/// MF-DFA and liquidity measures on one (already filtered) window.
WindowResult analyze_window(std::span<const double> values, const RollingConfig& config);

using ProgressCallback = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every window. Output is in chronological order and identical for any
/// worker count. The progress callback is serialized.
std::vector<WindowResult> roll(const ReturnSeries& returns, const RollingConfig& config,
                               const ProgressCallback& progress = {});

enum class RegimeLabel { Below, Above };
std::string_view to_string(RegimeLabel label);

struct Regime {
    Date start;
    Date end;
    std::size_t first_window = 0;
    std::size_t last_window = 0;
    RegimeLabel label = RegimeLabel::Above;
};

/// Maximal runs of windows with hurst < threshold ("below") or not ("above").
std::vector<Regime> detect_regimes(std::span<const WindowResult> results, double threshold = 0.5);

}  // namespace fmh
