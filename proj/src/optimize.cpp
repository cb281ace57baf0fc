#include "fmh/optimize.hpp"

#include "fmh/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fmh {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
    std::vector<double> x;
    double f;
};

double safe_eval(const std::function<double(std::span<const double>)>& objective,
                 const std::vector<double>& x) {
    const double f = objective(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
}

// One Nelder-Mead run from a fresh simplex around `start`; `budget` caps the
// iterations consumed.
SimplexResult run_once(const std::function<double(std::span<const double>)>& objective,
                       const std::vector<double>& start, const SimplexOptions& options,
                       int budget) {
    const std::size_t dim = start.size();
    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    simplex.push_back({start, safe_eval(objective, start)});
    for (std::size_t i = 0; i < dim; ++i) {
        auto x = start;
        x[i] += options.initial_step;
        simplex.push_back({x, safe_eval(objective, x)});
    }

    auto blend = [dim](const std::vector<double>& a, const std::vector<double>& b, double t) {
        // a + t * (b - a)
        std::vector<double> out(dim);
        for (std::size_t j = 0; j < dim; ++j) out[j] = a[j] + t * (b[j] - a[j]);
        return out;
    };

    SimplexResult result;
    int iter = 0;
    for (; iter < budget; ++iter) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double best = simplex.front().f;
        const double worst = simplex.back().f;
        if (std::isfinite(worst) && worst - best <= options.tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i].x[j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        Vertex& worst_vertex = simplex.back();
        const auto reflected = blend(centroid, worst_vertex.x, -kReflect);
        const double f_reflected = safe_eval(objective, reflected);

        if (f_reflected < simplex.front().f) {
            const auto expanded = blend(centroid, worst_vertex.x, -kExpand);
            const double f_expanded = safe_eval(objective, expanded);
            if (f_expanded < f_reflected) {
                worst_vertex = {expanded, f_expanded};
            } else {
                worst_vertex = {reflected, f_reflected};
            }
            continue;
        }
        if (f_reflected < simplex[dim - 1].f) {
            worst_vertex = {reflected, f_reflected};
            continue;
        }
        // Contraction: outside if the reflection improved on the worst point.
        const bool outside = f_reflected < worst_vertex.f;
        const auto contracted = outside ? blend(centroid, reflected, kContract)
                                        : blend(centroid, worst_vertex.x, kContract);
        const double f_contracted = safe_eval(objective, contracted);
        if (f_contracted < (outside ? f_reflected : worst_vertex.f)) {
            worst_vertex = {contracted, f_contracted};
            continue;
        }
        for (std::size_t i = 1; i <= dim; ++i) {
            simplex[i].x = blend(simplex.front().x, simplex[i].x, kShrink);
            simplex[i].f = safe_eval(objective, simplex[i].x);
        }
    }
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    result.x = simplex.front().x;
    result.value = simplex.front().f;
    result.iterations = iter;
    return result;
}

}  // namespace

SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, const SimplexOptions& options) {
    if (start.empty()) throw InputError("minimize_simplex: empty starting point");
    if (options.max_iterations <= 0) throw InputError("minimize_simplex: max_iterations <= 0");

    SimplexResult best = run_once(objective, start, options, options.max_iterations);
    int used = best.iterations;
    for (int r = 0; r < options.restarts && best.converged; ++r) {
        const int budget = options.max_iterations - used;
        if (budget <= 0) break;
        SimplexResult next = run_once(objective, best.x, options, budget);
        used += next.iterations;
        const double gain = best.value - next.value;
        const bool improved = gain > options.tolerance;
        if (next.value < best.value) {
            best.x = next.x;
            best.value = next.value;
        }
        best.converged = next.converged;
        if (!improved) break;
    }
    best.iterations = used;
    if (!std::isfinite(best.value)) best.converged = false;
    return best;
}

}  // namespace fmh
