#pragma once

#include "fmh/garch.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fmh {

/// Deterministic Gaussian source. The engine is mt19937_64 seeded through
/// std::seed_seq with the (seed, stream) pair split into 32-bit words, so two
/// streams of one seed are independent and every draw is reproducible across
/// platforms. Normals come from Box-Muller on 53-bit uniforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class GeneratorKind { Fgn, GaussianWhite, Garch };

GeneratorKind parse_generator_kind(std::string_view name);
std::string_view to_string(GeneratorKind kind);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Fgn;
    std::size_t n = 0;
    double hurst = 0.5;  // fgn
    double sigma = 1.0;  // fgn and white noise
    GarchParams garch{0.1, 0.1, 0.8};
    std::uint64_t seed = 0;
    std::size_t burn_in = 500;  // garch; at least 500
};

/// Throws InputError on out-of-range parameters.
void validate(const GeneratorSpec& spec);

/// gamma(k) = sigma^2/2 (|k+1|^2H - 2|k|^2H + |k-1|^2H).
double fgn_autocovariance(std::size_t lag, double hurst, double sigma = 1.0);

struct FgnDraw {
    std::vector<double> values;
    std::size_t embedding_size = 0;
    int enlargements = 0;  // times the embedding was doubled to stay non-negative definite
};

/// Fractional Gaussian noise by circulant embedding of the autocovariance
/// (embedding size 2n, doubled if a negative eigenvalue shows up).
FgnDraw gen_fgn_draw(const GeneratorSpec& spec);
std::vector<double> gen_fgn(const GeneratorSpec& spec);

std::vector<double> gen_white(const GeneratorSpec& spec);

/// r_t = sqrt(h_t) z_t, started at the unconditional variance, with
/// spec.burn_in leading draws discarded.
std::vector<double> gen_garch(const GeneratorSpec& spec);

std::vector<double> generate(const GeneratorSpec& spec);

}  // namespace fmh
