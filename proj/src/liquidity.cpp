#include "fmh/liquidity.hpp"

#include "fmh/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fmh {

RescaledFluctuations rescale(const FluctuationProfile& profile, double hurst) {
    if (profile.q() != 2.0) {
        throw InputError("rescale: liquidity measures need the q = 2 fluctuation profile");
    }
    if (!std::isfinite(hurst)) throw InputError("rescale: non-finite Hurst exponent");
    RescaledFluctuations out;
    out.scales.assign(profile.scales().begin(), profile.scales().end());
    out.values.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double s = static_cast<double>(profile.scales()[i]);
        const double f = profile.fq()[i];
        out.values[i] = f * f / std::pow(s, 2.0 * hurst);
    }
    return out;
}

RescaledFluctuations rescale(const FluctuationProfile& profile, const ScalingFit& fit) {
    if (fit.q != 2.0) throw InputError("rescale: scaling fit is not for q = 2");
    return rescale(profile, fit.hurst);
}

double f_zero(const ScalingFit& fit) { return std::exp(fit.log_intercept); }

double f_sigma(const RescaledFluctuations& rescaled) {
    const auto& r = rescaled.values;
    if (r.size() < 2) throw InputError("f_sigma: need at least 2 scales");
    const double n = static_cast<double>(r.size());
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
}

double f_range(const RescaledFluctuations& rescaled) {
    if (rescaled.values.empty()) throw InputError("f_range: no scales");
    const auto [lo, hi] = std::minmax_element(rescaled.values.begin(), rescaled.values.end());
    return *hi - *lo;
}

double f_ratio(const RescaledFluctuations& rescaled) {
    if (rescaled.values.empty()) throw InputError("f_ratio: no scales");
    const auto [lo, hi] = std::minmax_element(rescaled.values.begin(), rescaled.values.end());
    if (!(*lo > 0.0)) throw InputError("f_ratio: rescaled fluctuations must be > 0");
    return *hi / *lo;
}

LiquidityIndicators liquidity_indicators(const FluctuationProfile& profile, const ScalingFit& fit) {
    const RescaledFluctuations r = rescale(profile, fit);
    return LiquidityIndicators{f_zero(fit), f_sigma(r), f_range(r), f_ratio(r)};
}

}  // namespace fmh
