#pragma once

#include "fmh/ingest.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fmh {

/// GARCH(1,1) coefficients of h_t = omega + alpha * r_{t-1}^2 + beta * h_{t-1}.
struct GarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    /// omega > 0, alpha >= 0, beta >= 0 and alpha + beta < 1.
    [[nodiscard]] bool valid() const noexcept;
    /// Throws InputError naming the violated constraint.
    void validate() const;
    /// omega / (1 - alpha - beta).
    [[nodiscard]] double unconditional_variance() const;
};

struct GarchOptions {
    double tolerance = 1e-8;  // on the log-likelihood
    int max_iterations = 2000;
    /// Subtract the sample mean before fitting and filtering.
    bool demean = false;
};

struct GarchFit {
    GarchParams params;
    std::vector<double> h;  // conditional variances, aligned with the returns
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    double mean = 0.0;  // removed before fitting; 0 unless demeaning was requested
};

struct FilteredReturns {
    std::vector<Date> dates;
    std::vector<double> values;
};

/// Fewer returns than this and garch_fit refuses to estimate.
inline constexpr std::size_t kMinGarchObservations = 100;

/// Conditional variance path with h_1 = h1.
std::vector<double> garch_variance_path(std::span<const double> returns, const GarchParams& params,
                                        double h1);

/// Gaussian log-likelihood sum_t -(ln 2pi + ln h_t + r_t^2 / h_t) / 2.
/// Throws InputError on violated preconditions and NumericalError when an
/// intermediate overflows.
double garch_loglik(std::span<const double> returns, const GarchParams& params, double h1);

/// Maximum-likelihood fit by simplex search over (ln omega, a, b), where
/// alpha = e^a / (1 + e^a + e^b) and beta = e^b / (1 + e^a + e^b) keep the
/// search inside the stationary region. h_1 is the sample variance.
GarchFit garch_fit(std::span<const double> returns, const GarchOptions& options = {});
GarchFit garch_fit(const ReturnSeries& returns, const GarchOptions& options = {});

/// A GarchFit for fixed, known parameters (no estimation). h_1 defaults to
/// the sample variance.
GarchFit garch_evaluate(std::span<const double> returns, const GarchParams& params,
                        std::optional<double> h1 = std::nullopt);

/// fr_t = (r_t - mean) / sqrt(h_t).
std::vector<double> garch_filter(std::span<const double> returns, const GarchFit& fit);
FilteredReturns garch_filter(const ReturnSeries& returns, const GarchFit& fit);

/// Unbiased sample variance, the default initial conditional variance.
double sample_variance(std::span<const double> values);

}  // namespace fmh
