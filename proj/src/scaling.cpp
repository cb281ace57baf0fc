#include "fmh/scaling.hpp"

#include "fmh/error.hpp"
#include "fmh/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fmh {

Profile build_profile(std::span<const double> series) {
    if (series.size() < 2) {
        throw InputError("build_profile: need at least 2 values");
    }
    const double mean =
        std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
    Profile profile;
    profile.values.resize(series.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        running += series[i] - mean;
        profile.values[i] = running;
    }
    return profile;
}

namespace {

// Orthonormal polynomial basis of degree <= order sampled on s equally spaced
// points. Projecting a segment onto it gives the least-squares polynomial fit.
class PolynomialBasis {
public:
    PolynomialBasis(std::size_t scale, int order)
        : scale_(scale), terms_(static_cast<std::size_t>(order) + 1), basis_(terms_ * scale) {
        const double half = 0.5 * static_cast<double>(scale - 1);
        for (std::size_t k = 0; k < terms_; ++k) {
            double* p = row(k);
            for (std::size_t i = 0; i < scale; ++i) {
                const double x = (static_cast<double>(i) - half) / half;
                p[i] = std::pow(x, static_cast<double>(k));
            }
            // Modified Gram-Schmidt, two passes.
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < k; ++j) {
                    const double* b = row(j);
                    const double dot = std::inner_product(p, p + scale, b, 0.0);
                    for (std::size_t i = 0; i < scale; ++i) p[i] -= dot * b[i];
                }
            }
            const double norm = std::sqrt(std::inner_product(p, p + scale, p, 0.0));
            for (std::size_t i = 0; i < scale; ++i) p[i] /= norm;
        }
    }

    // Mean squared residual of `segment` after removing its projection.
    double mean_squared_residual(const double* segment, std::vector<double>& work) const {
        work.assign(segment, segment + scale_);
        for (std::size_t k = 0; k < terms_; ++k) {
            const double* b = row(k);
            const double coef = std::inner_product(work.begin(), work.end(), b, 0.0);
            for (std::size_t i = 0; i < scale_; ++i) work[i] -= coef * b[i];
        }
        return std::inner_product(work.begin(), work.end(), work.begin(), 0.0) /
               static_cast<double>(scale_);
    }

private:
    double* row(std::size_t k) { return basis_.data() + k * scale_; }
    const double* row(std::size_t k) const { return basis_.data() + k * scale_; }

    std::size_t scale_;
    std::size_t terms_;
    std::vector<double> basis_;
};

}  // namespace

std::vector<double> segment_fluctuations(std::span<const double> profile, std::size_t scale,
                                         int order) {
    if (order < 0) throw InputError("segment_fluctuations: negative detrending order");
    const std::size_t length = profile.size();
    if (scale < static_cast<std::size_t>(order) + 2 || scale > length / 4) {
        throw InputError("segment_fluctuations: scale " + std::to_string(scale) +
                         " outside [" + std::to_string(order + 2) + ", " +
                         std::to_string(length / 4) + "] for series of length " +
                         std::to_string(length));
    }
    const std::size_t segments = length / scale;
    const PolynomialBasis basis(scale, order);
    std::vector<double> out(2 * segments);
    std::vector<double> work;
    for (std::size_t v = 0; v < segments; ++v) {
        out[v] = basis.mean_squared_residual(profile.data() + v * scale, work);
        out[segments + v] =
            basis.mean_squared_residual(profile.data() + length - (v + 1) * scale, work);
    }
    return out;
}

double average_fluctuation(std::span<const double> squared_fluctuations, double q) {
    if (q == 0.0 || !std::isfinite(q)) {
        throw InputError("average_fluctuation: q must be finite and non-zero");
    }
    if (squared_fluctuations.empty()) {
        throw InputError("average_fluctuation: no segments");
    }
    double largest = 0.0;
    for (double f2 : squared_fluctuations) {
        if (!(f2 >= 0.0) || !std::isfinite(f2)) {
            throw InputError("average_fluctuation: squared fluctuations must be finite and >= 0");
        }
        if (f2 == 0.0 && q < 0.0) {
            throw InputError("average_fluctuation: zero segment fluctuation with negative q");
        }
        largest = std::max(largest, f2);
    }
    if (largest == 0.0) return 0.0;
    // Normalize by the largest segment so large |q| does not overflow.
    double sum = 0.0;
    for (double f2 : squared_fluctuations) sum += std::pow(f2 / largest, q / 2.0);
    const double mean = sum / static_cast<double>(squared_fluctuations.size());
    return std::pow(mean, 1.0 / q) * std::sqrt(largest);
}

FluctuationProfile::FluctuationProfile(double q, std::vector<std::size_t> scales,
                                       std::vector<double> fq)
    : q_(q), scales_(std::move(scales)), fq_(std::move(fq)) {
    if (scales_.size() != fq_.size()) {
        throw InputError("fluctuation profile: scale and fluctuation counts differ");
    }
    for (std::size_t i = 0; i < scales_.size(); ++i) {
        if (i > 0 && scales_[i] <= scales_[i - 1]) {
            throw InputError("fluctuation profile: scales must be strictly increasing");
        }
        if (!(fq_[i] > 0.0) || !std::isfinite(fq_[i])) {
            throw InputError("fluctuation profile: F_q(" + std::to_string(scales_[i]) +
                             ") = " + format_double(fq_[i]) +
                             " is not positive (degenerate series)");
        }
    }
}

ScalingFit fit_scaling(const FluctuationProfile& profile) {
    const std::size_t n = profile.size();
    if (n < 3) throw InputError("fit_scaling: need at least 3 scales");
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(static_cast<double>(profile.scales()[i]));
        y[i] = std::log(profile.fq()[i]);
    }
    const double nn = static_cast<double>(n);
    const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
    const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / nn;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        const double dy = y[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ScalingFit fit;
    fit.q = profile.q();
    fit.hurst = sxy / sxx;
    fit.log_intercept = y_mean - fit.hurst * x_mean;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.log_intercept + fit.hurst * x[i]);
        sse += r * r;
    }
    // A flat profile is fitted perfectly by a zero slope.
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
    fit.stderr_hurst = std::sqrt(sse / (nn - 2.0) / sxx);
    return fit;
}

std::vector<std::size_t> scale_range(std::size_t s_min, std::size_t s_max) {
    if (s_min > s_max) throw InputError("scale_range: s_min > s_max");
    std::vector<std::size_t> scales(s_max - s_min + 1);
    std::iota(scales.begin(), scales.end(), s_min);
    return scales;
}

std::map<double, MfdfaResult> mfdfa(std::span<const double> series, const MfdfaOptions& options) {
    if (options.scales.empty()) throw InputError("mfdfa: empty scale set");
    if (options.qs.empty()) throw InputError("mfdfa: empty q set");
    if (!std::is_sorted(options.scales.begin(), options.scales.end())) {
        throw InputError("mfdfa: scales must be increasing");
    }
    const std::size_t max_scale = options.scales.back();
    if (series.size() < 4 * max_scale) {
        throw InputError("mfdfa: series length " + std::to_string(series.size()) +
                         " < 4 * max scale " + std::to_string(max_scale));
    }
    for (double x : series) {
        if (!std::isfinite(x)) throw InputError("mfdfa: non-finite value in series");
    }
    std::vector<double> cumulated;
    std::span<const double> profile = series;
    if (options.integrate) {
        cumulated = build_profile(series).values;
        profile = cumulated;
    }

    std::vector<std::vector<double>> by_scale;
    by_scale.reserve(options.scales.size());
    for (std::size_t s : options.scales) {
        by_scale.push_back(segment_fluctuations(profile, s, options.order));
    }

    std::map<double, MfdfaResult> out;
    for (double q : options.qs) {
        std::vector<double> fq(options.scales.size());
        for (std::size_t i = 0; i < options.scales.size(); ++i) {
            fq[i] = average_fluctuation(by_scale[i], q);
        }
        FluctuationProfile fp(q, options.scales, std::move(fq));
        ScalingFit fit = fit_scaling(fp);
        out.insert_or_assign(q, MfdfaResult{std::move(fp), fit});
    }
    return out;
}

Persistence classify_persistence(double hurst, double band) {
    if (std::abs(hurst - 0.5) <= band) return Persistence::Uncorrelated;
    return hurst < 0.5 ? Persistence::AntiPersistent : Persistence::Persistent;
}

std::string_view to_string(Persistence persistence) {
    switch (persistence) {
        case Persistence::AntiPersistent: return "anti-persistent";
        case Persistence::Uncorrelated: return "uncorrelated";
        case Persistence::Persistent: return "persistent";
    }
    return "unknown";
}

}  // namespace fmh
