#include <gtest/gtest.h>

#include "fmh/error.hpp"
#include "fmh/scaling.hpp"
#include "fmh/synth.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace fmh;

namespace {

std::vector<double> fgn(double hurst, std::size_t n, std::uint64_t seed) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Fgn;
    spec.hurst = hurst;
    spec.n = n;
    spec.seed = seed;
    return gen_fgn(spec);
}

double hurst2(const std::vector<double>& x) {
    MfdfaOptions opts;
    return mfdfa(x, opts).at(2.0).fit.hurst;
}

FluctuationProfile power_law(double c, double h, std::size_t s_min, std::size_t s_max) {
    auto scales = scale_range(s_min, s_max);
    std::vector<double> f;
    for (std::size_t s : scales) f.push_back(c * std::pow(static_cast<double>(s), h));
    return FluctuationProfile(2.0, scales, f);
}

}  // namespace

TEST(BuildProfile, Examples) {
    EXPECT_EQ(build_profile(std::vector<double>{1, -1, 1, -1}).values,
              (std::vector<double>{1, 0, 1, 0}));
    EXPECT_EQ(build_profile(std::vector<double>{5, 5, 5}).values, (std::vector<double>{0, 0, 0}));
    const auto p = build_profile(std::vector<double>{1, 2, 3}).values;
    EXPECT_DOUBLE_EQ(p[0], -1.0);
    EXPECT_DOUBLE_EQ(p[1], -1.0);
    EXPECT_NEAR(p[2], 0.0, 1e-15);
    EXPECT_THROW(build_profile(std::vector<double>{1.0}), InputError);
}

TEST(BuildProfile, Closes) {
    const auto x = fgn(0.6, 5000, 1);
    const auto p = build_profile(x).values;
    const double sd = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / 5000.0);
    EXPECT_LE(std::abs(p.back()), 1e-9 * 5000.0 * sd);
}

TEST(SegmentFluctuations, LinearProfileIsZero) {
    std::vector<double> profile(40);
    for (std::size_t i = 0; i < profile.size(); ++i) profile[i] = 3.0 - 0.25 * static_cast<double>(i);
    for (double f : segment_fluctuations(profile, 7, 1)) EXPECT_NEAR(f, 0.0, 1e-20);
}

TEST(SegmentFluctuations, FrozenTwentyPointLinear) {
    // Oracle: numpy.polyfit on the profile of this series, s = 5, degree 1.
    const std::vector<double> x{-0.359668, 1.203675, 1.396868, 0.317236, 0.414134,
                                -0.48955,  -0.914121, -0.900361, -0.998431, 0.929205,
                                -0.056292, 0.128279, -0.63997,  -1.087817, -1.201954,
                                -0.841569, 0.599157, 0.01844,   -0.456772, -0.239278};
    const std::vector<double> expected{0.1183087133548,      0.27028318116728001,
                                       0.14658075197862003,  0.079891643690480005,
                                       0.079891643690480005, 0.14658075197862003,
                                       0.27028318116728001,  0.1183087133548};
    const auto got = segment_fluctuations(build_profile(x).values, 5, 1);
    ASSERT_EQ(got.size(), 8u);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
    const auto naive = oracle::naive_segment_fluctuations(x, 5, 1);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], naive[i], 1e-12);
}

TEST(SegmentFluctuations, FrozenQuadraticWithRemainder) {
    // Oracle: numpy.polyfit degree 2, T = 23 (3 points left over), s = 5.
    const std::vector<double> x{0.553261, 0.217601,  -0.05799,  -2.318936, 0.431494,  -2.12628,
                                0.909921, 0.605966,  0.830057,  0.827698,  0.298514,  -0.535001,
                                -0.307062, 1.508072, -0.582229, -0.228124, -0.724515, -0.517249,
                                -0.306558, 0.256552, -0.293856, -0.354708, -0.616815};
    const std::vector<double> expected{
        0.32300533238127993,   0.0034456721272228541, 0.19368183200028569,
        0.0028804899382514218, 0.0030258345826514291, 0.0073323525453028683,
        0.016794329503222846,  0.32964742090996568};
    const auto got = segment_fluctuations(build_profile(x).values, 5, 2);
    ASSERT_EQ(got.size(), 8u);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
}

TEST(SegmentFluctuations, DivisibleLengthIsSymmetric) {
    const auto x = fgn(0.5, 120, 4);
    const auto f = segment_fluctuations(build_profile(x).values, 10, 1);
    std::vector<double> forward(f.begin(), f.begin() + 12);
    std::vector<double> backward(f.begin() + 12, f.end());
    std::sort(forward.begin(), forward.end());
    std::sort(backward.begin(), backward.end());
    EXPECT_EQ(forward, backward);
}

TEST(SegmentFluctuations, ScaleOutOfRange) {
    const std::vector<double> p(40, 1.0);
    EXPECT_THROW(segment_fluctuations(p, 2, 1), InputError);   // < order + 2
    EXPECT_THROW(segment_fluctuations(p, 11, 1), InputError);  // > T / 4
    EXPECT_NO_THROW(segment_fluctuations(p, 10, 1));
    EXPECT_EQ(segment_fluctuations(p, 3, 1).size(), 26u);
}

TEST(SegmentFluctuations, PiecewisePolynomialDetrendsExactly) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int order = 1; order <= 3; ++order) {
        const std::size_t s = 12;
        std::vector<double> profile;
        for (int seg = 0; seg < 8; ++seg) {
            std::vector<double> c(static_cast<std::size_t>(order) + 1);
            for (double& v : c) v = coef(gen);
            for (std::size_t i = 0; i < s; ++i) {
                double y = 0.0;
                for (std::size_t k = 0; k < c.size(); ++k) {
                    y += c[k] * std::pow(static_cast<double>(i) / 4.0, static_cast<double>(k));
                }
                profile.push_back(y);
            }
        }
        for (double f : segment_fluctuations(profile, s, order)) EXPECT_NEAR(f, 0.0, 1e-9);
    }
}

TEST(SegmentFluctuations, MatchesBruteForceOnSmallSeries) {
    std::mt19937_64 gen(77);
    std::normal_distribution<double> noise;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 16 + gen() % 35;  // 16..50
        std::vector<double> x(n);
        for (double& v : x) v = noise(gen);
        const int order = 1 + static_cast<int>(gen() % 2);
        const std::size_t lo = static_cast<std::size_t>(order) + 2;
        const std::size_t s = lo + gen() % (n / 4 - lo + 1);
        const auto got = segment_fluctuations(build_profile(x).values, s, order);
        const auto want = oracle::naive_segment_fluctuations(x, s, order);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_NEAR(got[i], want[i], 1e-10) << "n=" << n << " s=" << s << " order=" << order;
        }
    }
}

TEST(AverageFluctuation, Examples) {
    const std::vector<double> equal(6, 9.0);
    for (double q : {-3.0, -1.0, 1.0, 2.0, 5.0}) EXPECT_NEAR(average_fluctuation(equal, q), 3.0, 1e-14);
    const std::vector<double> two{1.0, 4.0};
    EXPECT_NEAR(average_fluctuation(two, 2.0), 1.5811388300841898, 1e-14);
    EXPECT_NEAR(average_fluctuation(two, 4.0), 1.7074764851741444, 1e-14);
}

TEST(AverageFluctuation, Errors) {
    const std::vector<double> two{1.0, 4.0};
    EXPECT_THROW(average_fluctuation(two, 0.0), InputError);
    const std::vector<double> with_zero{0.0, 4.0};
    EXPECT_THROW(average_fluctuation(with_zero, -2.0), InputError);
    EXPECT_NEAR(average_fluctuation(with_zero, 2.0), std::sqrt(2.0), 1e-15);
    const std::vector<double> negative{-1.0, 4.0};
    EXPECT_THROW(average_fluctuation(negative, 2.0), InputError);
}

TEST(FluctuationProfile, Invariants) {
    EXPECT_THROW(FluctuationProfile(2.0, {10, 10, 12}, {1, 1, 1}), InputError);
    EXPECT_THROW(FluctuationProfile(2.0, {10, 11}, {1}), InputError);
    EXPECT_THROW(FluctuationProfile(2.0, {10, 11}, {1, 0}), InputError);
}

TEST(FitScaling, ExactPowerLaw) {
    const auto fit = fit_scaling(power_law(2.0, 0.6, 10, 50));
    EXPECT_NEAR(fit.hurst, 0.6, 1e-12);
    EXPECT_NEAR(fit.log_intercept, std::log(2.0), 1e-12);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(fit.stderr_hurst, 0.0, 1e-12);
    EXPECT_EQ(fit.q, 2.0);
}

TEST(FitScaling, ConstantGivesZeroSlope) {
    const auto fit = fit_scaling(power_law(0.7, 0.0, 10, 50));
    EXPECT_NEAR(fit.hurst, 0.0, 1e-14);
    EXPECT_NEAR(fit.log_intercept, std::log(0.7), 1e-14);
}

TEST(FitScaling, NeedsThreeScales) {
    EXPECT_THROW(fit_scaling(power_law(1.0, 0.5, 10, 11)), InputError);
}

TEST(FitScaling, StandardErrorMatchesTextbookFormula) {
    const FluctuationProfile fp(2.0, {10, 20, 40}, {1.0, 1.6, 2.9});
    const auto fit = fit_scaling(fp);
    // Hand computation in log space.
    const double x[] = {std::log(10.0), std::log(20.0), std::log(40.0)};
    const double y[] = {0.0, std::log(1.6), std::log(2.9)};
    const double xm = (x[0] + x[1] + x[2]) / 3;
    const double ym = (y[0] + y[1] + y[2]) / 3;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    const double b = sxy / sxx;
    const double a = ym - b * xm;
    double sse = 0;
    for (int i = 0; i < 3; ++i) sse += std::pow(y[i] - a - b * x[i], 2);
    EXPECT_NEAR(fit.hurst, b, 1e-14);
    EXPECT_NEAR(fit.stderr_hurst, std::sqrt(sse / 1.0 / sxx), 1e-14);
}

TEST(Mfdfa, WhiteNoiseNearHalf) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::GaussianWhite;
    spec.n = 10000;
    spec.seed = 2;
    const double h = hurst2(gen_white(spec));
    EXPECT_GE(h, 0.45);
    EXPECT_LE(h, 0.55);
}

TEST(Mfdfa, PersistentFgn) {
    const double h = hurst2(fgn(0.7, 10000, 3));
    EXPECT_GE(h, 0.65);
    EXPECT_LE(h, 0.75);
}

TEST(Mfdfa, AntiPersistentFgn) {
    const double h = hurst2(fgn(0.3, 10000, 3));
    EXPECT_GE(h, 0.25);
    EXPECT_LE(h, 0.35);
}

TEST(Mfdfa, MonofractalFlatness) {
    MfdfaOptions opts;
    opts.qs = {1, 2, 3, 4};
    const auto r = mfdfa(fgn(0.7, 10000, 8), opts);
    ASSERT_EQ(r.size(), 4u);
    double lo = 1e9, hi = -1e9;
    for (const auto& [q, res] : r) {
        EXPECT_EQ(res.fit.q, q);
        EXPECT_EQ(res.profile.q(), q);
        lo = std::min(lo, res.fit.hurst);
        hi = std::max(hi, res.fit.hurst);
    }
    EXPECT_LT(hi - lo, 0.1);
}

TEST(Mfdfa, ScaleInvariance) {
    const auto x = fgn(0.6, 2000, 5);
    MfdfaOptions opts;
    opts.qs = {-2, 2, 3};
    opts.scales = scale_range(10, 50);
    const auto base = mfdfa(x, opts);
    for (double k : {0.01, 3.5, 250.0}) {
        std::vector<double> scaled = x;
        for (double& v : scaled) v *= k;
        const auto r = mfdfa(scaled, opts);
        for (double q : opts.qs) {
            EXPECT_NEAR(r.at(q).fit.hurst, base.at(q).fit.hurst, 1e-12);
            EXPECT_NEAR(r.at(q).fit.log_intercept, base.at(q).fit.log_intercept + std::log(k), 1e-10);
        }
    }
}

TEST(Mfdfa, ShufflingDestroysMemory) {
    auto x = fgn(0.8, 10000, 12);
    EXPECT_GT(hurst2(x), 0.7);
    std::mt19937_64 perm(2024);
    std::shuffle(x.begin(), x.end(), perm);
    const double h = hurst2(x);
    EXPECT_GE(h, 0.45);
    EXPECT_LE(h, 0.55);
}

TEST(Mfdfa, Preconditions) {
    const auto x = fgn(0.5, 199, 1);
    EXPECT_THROW(mfdfa(x, MfdfaOptions{}), InputError);  // 199 < 4 * 50
    MfdfaOptions zero_q;
    zero_q.qs = {0.0};
    EXPECT_THROW(mfdfa(fgn(0.5, 400, 1), zero_q), InputError);
    const std::vector<double> flat(400, 1.0);
    EXPECT_THROW(mfdfa(flat, MfdfaOptions{}), InputError);
}

TEST(Mfdfa, IntegrateOffTreatsInputAsProfile) {
    const auto x = fgn(0.5, 1000, 6);
    MfdfaOptions on;
    MfdfaOptions off;
    off.integrate = false;
    const auto profile = build_profile(x).values;
    EXPECT_NEAR(mfdfa(profile, off).at(2.0).fit.hurst, mfdfa(x, on).at(2.0).fit.hurst, 1e-12);
}

TEST(ClassifyPersistence, Bands) {
    EXPECT_EQ(classify_persistence(0.5), Persistence::Uncorrelated);
    EXPECT_EQ(classify_persistence(0.7, 0.01), Persistence::Persistent);
    EXPECT_EQ(classify_persistence(0.49, 0.02), Persistence::Uncorrelated);
    EXPECT_EQ(classify_persistence(0.3), Persistence::AntiPersistent);
    EXPECT_EQ(to_string(Persistence::AntiPersistent), "anti-persistent");
}
