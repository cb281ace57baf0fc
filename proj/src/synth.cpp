#include "fmh/synth.hpp"

#include "fmh/error.hpp"
#include "fmh/text.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace fmh {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "fgn") return GeneratorKind::Fgn;
    if (name == "gaussian-white" || name == "white") return GeneratorKind::GaussianWhite;
    if (name == "garch") return GeneratorKind::Garch;
    throw InputError("unknown generator kind '" + std::string(name) +
                     "' (expected fgn, gaussian-white or garch)");
}

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Fgn: return "fgn";
        case GeneratorKind::GaussianWhite: return "gaussian-white";
        case GeneratorKind::Garch: return "garch";
    }
    return "unknown";
}

void validate(const GeneratorSpec& spec) {
    if (spec.n < 2) throw InputError("generator: n must be >= 2");
    switch (spec.kind) {
        case GeneratorKind::Fgn:
            if (!(spec.hurst > 0.0 && spec.hurst < 1.0)) {
                throw InputError("generator: H out of (0,1), got " + format_double(spec.hurst));
            }
            [[fallthrough]];
        case GeneratorKind::GaussianWhite:
            if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) {
                throw InputError("generator: sigma must be > 0");
            }
            break;
        case GeneratorKind::Garch:
            spec.garch.validate();
            if (spec.burn_in < 500) throw InputError("generator: GARCH burn-in must be >= 500");
            break;
    }
}

double fgn_autocovariance(std::size_t lag, double hurst, double sigma) {
    const double k = static_cast<double>(lag);
    const double two_h = 2.0 * hurst;
    return 0.5 * sigma * sigma *
           (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) + std::pow(std::abs(k - 1.0), two_h));
}

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

// Eigenvalues of the circulant matrix with first row `row` (real, symmetric).
std::vector<double> circulant_eigenvalues(std::vector<double> row) {
    const std::size_t m = row.size();
    FftwBuffer<fftw_complex> spectrum(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m / 2 + 1))));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), row.data(), spectrum.get(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::vector<double> eig(m / 2 + 1);
    for (std::size_t k = 0; k < eig.size(); ++k) eig[k] = spectrum[k][0];
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return eig;
}

}  // namespace

FgnDraw gen_fgn_draw(const GeneratorSpec& spec) {
    if (spec.kind != GeneratorKind::Fgn) throw InputError("gen_fgn: spec kind is not fgn");
    validate(spec);

    FgnDraw draw;
    std::size_t m = 2 * spec.n;
    std::vector<double> eig;
    for (;;) {
        std::vector<double> row(m);
        for (std::size_t j = 0; j < m; ++j) {
            row[j] = fgn_autocovariance(std::min(j, m - j), spec.hurst, spec.sigma);
        }
        eig = circulant_eigenvalues(std::move(row));
        const double largest = *std::max_element(eig.begin(), eig.end());
        bool ok = true;
        for (double& e : eig) {
            if (e < 0.0) {
                if (e > -1e-10 * largest) {
                    e = 0.0;  // round-off
                } else {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) break;
        if (draw.enlargements >= 8) {
            throw NumericalError("gen_fgn: circulant embedding not non-negative definite after " +
                                 std::to_string(draw.enlargements) + " enlargements");
        }
        m *= 2;
        ++draw.enlargements;
    }
    draw.embedding_size = m;

    // Hermitian half-spectrum with the right variances; the inverse real
    // transform then has autocovariance equal to the circulant row.
    const std::size_t half = m / 2;
    const double md = static_cast<double>(m);
    FftwBuffer<fftw_complex> coeffs(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (half + 1))));
    std::vector<double> out(m);
    Rng rng(spec.seed);
    coeffs[0][0] = std::sqrt(eig[0] / md) * rng.normal();
    coeffs[0][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
        const double scale = std::sqrt(eig[k] / (2.0 * md));
        coeffs[k][0] = scale * rng.normal();
        coeffs[k][1] = scale * rng.normal();
    }
    coeffs[half][0] = std::sqrt(eig[half] / md) * rng.normal();
    coeffs[half][1] = 0.0;

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), coeffs.get(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    out.resize(spec.n);
    draw.values = std::move(out);
    return draw;
}

std::vector<double> gen_fgn(const GeneratorSpec& spec) { return gen_fgn_draw(spec).values; }

std::vector<double> gen_white(const GeneratorSpec& spec) {
    if (spec.kind != GeneratorKind::GaussianWhite) {
        throw InputError("gen_white: spec kind is not gaussian-white");
    }
    validate(spec);
    Rng rng(spec.seed);
    std::vector<double> out(spec.n);
    for (double& x : out) x = spec.sigma * rng.normal();
    return out;
}

std::vector<double> gen_garch(const GeneratorSpec& spec) {
    if (spec.kind != GeneratorKind::Garch) throw InputError("gen_garch: spec kind is not garch");
    validate(spec);
    const GarchParams& p = spec.garch;
    Rng rng(spec.seed);
    double h = p.unconditional_variance();
    double prev = 0.0;
    std::vector<double> out;
    out.reserve(spec.n);
    const std::size_t total = spec.burn_in + spec.n;
    for (std::size_t t = 0; t < total; ++t) {
        if (t > 0) h = p.omega + p.alpha * prev * prev + p.beta * h;
        prev = std::sqrt(h) * rng.normal();
        if (t >= spec.burn_in) out.push_back(prev);
    }
    return out;
}

std::vector<double> generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorKind::Fgn: return gen_fgn(spec);
        case GeneratorKind::GaussianWhite: return gen_white(spec);
        case GeneratorKind::Garch: return gen_garch(spec);
    }
    throw InputError("generate: unknown generator kind");
}

}  // namespace fmh
