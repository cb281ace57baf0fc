#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace fmh {

/// Cumulative sum of the demeaned series.
struct Profile {
    std::vector<double> values;
};

Profile build_profile(std::span<const double> series);

/// Squared fluctuations F^2(v, s) of the profile around a least-squares
/// polynomial of degree `order`, one per segment: floor(T/s) segments laid
/// from the start, then floor(T/s) laid from the end. Requires
/// order + 2 <= s <= floor(T/4).
std::vector<double> segment_fluctuations(std::span<const double> profile, std::size_t scale,
                                         int order = 1);

/// Order-q power mean of per-segment RMS fluctuations:
/// ( mean_v (F^2(v, s))^(q/2) )^(1/q). q = 0 is rejected.
double average_fluctuation(std::span<const double> squared_fluctuations, double q);

/// F_q(s) over a strictly increasing set of scales, all fluctuations > 0.
class FluctuationProfile {
public:
    FluctuationProfile(double q, std::vector<std::size_t> scales, std::vector<double> fq);

    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] std::span<const std::size_t> scales() const noexcept { return scales_; }
    [[nodiscard]] std::span<const double> fq() const noexcept { return fq_; }
    [[nodiscard]] std::size_t size() const noexcept { return scales_.size(); }

private:
    double q_;
    std::vector<std::size_t> scales_;
    std::vector<double> fq_;
};

/// OLS of ln F_q(s) on ln s.
struct ScalingFit {
    double q = 2.0;
    double hurst = 0.0;          // slope
    double log_intercept = 0.0;  // natural-log intercept
    double r_squared = 0.0;
    double stderr_hurst = 0.0;
};

ScalingFit fit_scaling(const FluctuationProfile& profile);

/// Every integer scale in [s_min, s_max].
std::vector<std::size_t> scale_range(std::size_t s_min, std::size_t s_max);

struct MfdfaOptions {
    std::vector<std::size_t> scales = scale_range(10, 50);
    std::vector<double> qs = {2.0};
    int order = 1;
    /// Cumulate (profile) the series before segmenting. Turning this off
    /// treats the input as an already integrated signal.
    bool integrate = true;
};

struct MfdfaResult {
    FluctuationProfile profile;
    ScalingFit fit;
};

/// Generalized Hurst exponents H(q) for every requested q, keyed by q.
/// Requires series length >= 4 * max scale.
std::map<double, MfdfaResult> mfdfa(std::span<const double> series, const MfdfaOptions& options);

enum class Persistence { AntiPersistent, Uncorrelated, Persistent };

/// |H - 0.5| <= band is uncorrelated; below is anti-persistent, above persistent.
Persistence classify_persistence(double hurst, double band = 0.01);

std::string_view to_string(Persistence persistence);

}  // namespace fmh
