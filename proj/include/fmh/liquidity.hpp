#pragma once

#include "fmh/scaling.hpp"

#include <span>
#include <vector>

namespace fmh {

/// R(s) = F_2(s)^2 / s^(2H) for every scale of a q = 2 fluctuation profile.
/// Constant in s exactly when variance scales as a pure power law.
struct RescaledFluctuations {
    std::vector<std::size_t> scales;
    std::vector<double> values;
};

/// Scaling-based activity measures for one window.
struct LiquidityIndicators {
    double f0 = 0.0;       // e^c, the fitted fluctuation extrapolated to unit horizon
    double f_sigma = 0.0;  // sample standard deviation of R(s)
    double f_range = 0.0;  // max R - min R
    double f_ratio = 1.0;  // max R / min R
};

/// Rescales with the profile's own fitted exponent. Throws InputError unless
/// profile.q() == 2 and fit.q == 2.
RescaledFluctuations rescale(const FluctuationProfile& profile, const ScalingFit& fit);

/// Rescales with an externally supplied exponent.
RescaledFluctuations rescale(const FluctuationProfile& profile, double hurst);

double f_zero(const ScalingFit& fit);

/// sqrt( sum (R - mean R)^2 / (n - 1) ), n = number of scales.
double f_sigma(const RescaledFluctuations& rescaled);
double f_range(const RescaledFluctuations& rescaled);
double f_ratio(const RescaledFluctuations& rescaled);

LiquidityIndicators liquidity_indicators(const FluctuationProfile& profile, const ScalingFit& fit);

}  // namespace fmh
