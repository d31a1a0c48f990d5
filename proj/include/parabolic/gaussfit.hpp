#pragma once

#include <string>
#include <vector>

#include "parabolic/davies.hpp"
#include "parabolic/fundsol.hpp"

namespace parabolic {

struct FitPoint {
    double tau = 0.0;   ///< t - s
    double dist = 0.0;  ///< |x - y| on the torus
    double value = 0.0; ///< |Gamma^eps|
};

struct FitWindow {
    double tau_min = 0.0;
    double tau_max = 0.0;
    /// Cap on |x - y|; clamped to L/4.
    double dist_max = 0.0;
    /// Cap on |x - y|^2 / (t - s).
    double max_similarity = 16.0;
    double noise_floor = 1e-12;
    /// Use every `node_stride`-th node per axis and every `level_stride`-th level.
    int node_stride = 1;
    int level_stride = 1;
};

struct GaussianFit {
    double C_fit = 0.0;
    double kappa_fit = 0.0;
    double C_sup = 0.0;
    double rms_residual = 0.0;
    double max_residual = 0.0;
    std::size_t points = 0;
    int dim = 1;
    FitWindow window;
};

/**
 * Least squares of log|Gamma| + (n/2) log(t - s) = log C - kappa |x - y|^2 / (t - s).
 * Throws EmptyWindow (no points) or DegenerateFit (one similarity value).
 */
GaussianFit gaussian_fit(int dim, const std::vector<FitPoint>& points);

/// Points of the column inside the window. tau_min is raised to 4 eps^2.
std::vector<FitPoint> collect_fit_points(const Grid& grid, const FundSolColumn& col, const FitWindow& window);

/// Pools the window points of all columns and fits them together.
GaussianFit gaussian_fit(const Grid& grid, const std::vector<const FundSolColumn*>& columns, const FitWindow& window);

struct BoundVerdict {
    bool pass = false;
    double kappa_fit = 0.0;
    double kappa_bound = 0.0;
    double kappa_margin = 0.0; ///< kappa_fit / kappa_bound
    double C_sup = 0.0;
    std::string verdict;
};

/// PASS iff kappa_fit >= kappa_bound and C_sup is finite.
BoundVerdict bound_verdict(const GaussianFit& fit, const BoundConstants& consts);

} // namespace parabolic
