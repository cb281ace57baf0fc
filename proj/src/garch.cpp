#include "fmh/garch.hpp"

#include "fmh/error.hpp"
#include "fmh/optimize.hpp"
#include "fmh/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fmh {

bool GarchParams::valid() const noexcept {
    return std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta) && omega > 0.0 &&
           alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0;
}

void GarchParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InputError("GARCH omega must be > 0, got " + format_double(omega));
    }
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw InputError("GARCH alpha and beta must be >= 0");
    }
    if (!(alpha + beta < 1.0)) {
        throw InputError("GARCH alpha + beta must be < 1 for stationarity, got " +
                         format_double(alpha + beta));
    }
}

double GarchParams::unconditional_variance() const {
    validate();
    return omega / (1.0 - alpha - beta);
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) throw InputError("sample variance needs at least 2 values");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : values) ss += (x - mean) * (x - mean);
    return ss / (n - 1.0);
}

std::vector<double> garch_variance_path(std::span<const double> returns, const GarchParams& params,
                                        double h1) {
    params.validate();
    if (!(h1 > 0.0) || !std::isfinite(h1)) {
        throw InputError("initial variance h1 must be > 0");
    }
    std::vector<double> h(returns.size());
    if (h.empty()) return h;
    h[0] = h1;
    for (std::size_t t = 1; t < returns.size(); ++t) {
        h[t] = params.omega + params.alpha * returns[t - 1] * returns[t - 1] +
               params.beta * h[t - 1];
    }
    return h;
}

double garch_loglik(std::span<const double> returns, const GarchParams& params, double h1) {
    if (returns.size() < 2) throw InputError("garch_loglik: need at least 2 returns");
    params.validate();
    if (!(h1 > 0.0) || !std::isfinite(h1)) {
        throw InputError("garch_loglik: initial variance h1 must be > 0");
    }
    constexpr double log_two_pi = 1.8378770664093454835606594728112;  // ln(2 pi)
    double h = h1;
    double total = 0.0;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (t > 0) {
            h = params.omega + params.alpha * returns[t - 1] * returns[t - 1] + params.beta * h;
        }
        total += -0.5 * (log_two_pi + std::log(h) + returns[t] * returns[t] / h);
    }
    if (!std::isfinite(total)) {
        throw NumericalError("garch_loglik: non-finite log-likelihood");
    }
    return total;
}

namespace {

GarchParams from_unconstrained(std::span<const double> x) {
    // Softmax over (0, a, b): the three weights sum to 1, so alpha + beta < 1.
    const double top = std::max({0.0, x[1], x[2]});
    const double e0 = std::exp(-top);
    const double ea = std::exp(x[1] - top);
    const double eb = std::exp(x[2] - top);
    const double denom = e0 + ea + eb;
    return GarchParams{std::exp(x[0]), ea / denom, eb / denom};
}

std::vector<double> to_unconstrained(const GarchParams& p) {
    const double slack = 1.0 - p.alpha - p.beta;
    return {std::log(p.omega), std::log(p.alpha / slack), std::log(p.beta / slack)};
}

std::vector<double> centered(std::span<const double> returns, double mean) {
    std::vector<double> out(returns.begin(), returns.end());
    for (double& r : out) r -= mean;
    return out;
}

}  // namespace

GarchFit garch_fit(std::span<const double> returns, const GarchOptions& options) {
    if (returns.size() < kMinGarchObservations) {
        throw InputError("garch_fit: need at least " + std::to_string(kMinGarchObservations) +
                         " returns, got " + std::to_string(returns.size()));
    }
    for (double r : returns) {
        if (!std::isfinite(r)) throw InputError("garch_fit: non-finite return");
    }
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    if (*lo == *hi) {
        throw InputError("degenerate returns: all values identical, GARCH is not identifiable");
    }

    const double mean =
        options.demean
            ? std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size())
            : 0.0;
    const std::vector<double> data = centered(returns, mean);
    const double h1 = sample_variance(data);

    auto objective = [&](std::span<const double> x) {
        const GarchParams p = from_unconstrained(x);
        if (!p.valid()) return std::numeric_limits<double>::infinity();
        try {
            return -garch_loglik(data, p, h1);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    SimplexOptions simplex;
    simplex.tolerance = options.tolerance;
    simplex.max_iterations = options.max_iterations;
    const GarchParams start{0.1 * h1, 0.05, 0.90};
    const SimplexResult best = minimize_simplex(objective, to_unconstrained(start), simplex);
    if (!std::isfinite(best.value)) {
        throw NumericalError("garch_fit: log-likelihood not finite anywhere the search visited");
    }

    GarchFit fit;
    fit.params = from_unconstrained(best.x);
    fit.h = garch_variance_path(data, fit.params, h1);
    fit.loglik = -best.value;
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    fit.mean = mean;
    return fit;
}

GarchFit garch_fit(const ReturnSeries& returns, const GarchOptions& options) {
    return garch_fit(std::span<const double>(returns.values), options);
}

GarchFit garch_evaluate(std::span<const double> returns, const GarchParams& params,
                        std::optional<double> initial) {
    const double h1 = initial ? *initial : sample_variance(returns);
    GarchFit fit;
    fit.params = params;
    fit.h = garch_variance_path(returns, params, h1);
    fit.loglik = garch_loglik(returns, params, h1);
    fit.converged = true;
    return fit;
}

std::vector<double> garch_filter(std::span<const double> returns, const GarchFit& fit) {
    if (returns.size() != fit.h.size()) {
        throw InputError("garch_filter: " + std::to_string(returns.size()) + " returns but " +
                         std::to_string(fit.h.size()) + " conditional variances");
    }
    std::vector<double> out(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) {
        if (!(fit.h[t] > 0.0)) throw NumericalError("garch_filter: non-positive variance");
        out[t] = (returns[t] - fit.mean) / std::sqrt(fit.h[t]);
    }
    return out;
}

FilteredReturns garch_filter(const ReturnSeries& returns, const GarchFit& fit) {
    return FilteredReturns{returns.dates, garch_filter(std::span<const double>(returns.values), fit)};
}

}  // namespace fmh
