#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fmh {

struct SimplexOptions {
    /// Stop when the objective values across the simplex differ by at most this.
    double tolerance = 1e-8;
    int max_iterations = 2000;
    /// Edge length of the initial simplex along each coordinate.
    double initial_step = 0.5;
    /// Fresh simplexes built around the converged point; a restart that does
    /// not improve the objective by more than the tolerance ends the search.
    int restarts = 2;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead downhill simplex minimization. Non-finite objective values are
/// treated as +infinity, so infeasible points are simply never accepted.
SimplexResult minimize_simplex(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, const SimplexOptions& options = {});

}  // namespace fmh
