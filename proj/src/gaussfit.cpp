#include "parabolic/gaussfit.hpp"

#include <cmath>
#include <limits>

#include "parabolic/errors.hpp"

namespace parabolic {

GaussianFit gaussian_fit(int dim, const std::vector<FitPoint>& points)
{
    if (points.empty()) throw LabError(ErrorKind::EmptyWindow, "no fit points in the window");
    const double half_n = 0.5 * dim;
    const double count = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& pt : points) {
        const double x = pt.dist * pt.dist / pt.tau;
        const double y = std::log(pt.value) + half_n * std::log(pt.tau);
        xs.push_back(x);
        ys.push_back(y);
        mx += x;
        my += y;
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 1e-14 * std::max(1.0, mx * mx) * count))
        throw LabError(ErrorKind::DegenerateFit, "all fit points share one value of |x-y|^2/(t-s)");

    GaussianFit fit;
    fit.dim = dim;
    fit.points = points.size();
    const double slope = sxy / sxx;
    fit.kappa_fit = -slope;
    const double logc = my - slope * mx;
    fit.C_fit = std::exp(logc);
    double ss = 0.0;
    double log_sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (logc + slope * xs[i]);
        ss += r * r;
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
        log_sup = std::max(log_sup, ys[i] + fit.kappa_fit * xs[i]);
    }
    fit.rms_residual = std::sqrt(ss / count);
    fit.C_sup = std::exp(log_sup);
    return fit;
}

std::vector<FitPoint> collect_fit_points(const Grid& grid, const FundSolColumn& col, const FitWindow& window)
{
    std::vector<FitPoint> out;
    const double s = col.source.Y.t;
    const double tau_min = std::max(window.tau_min, 4.0 * col.source.eps * col.source.eps);
    const double dist_max = window.dist_max > 0.0 ? std::min(window.dist_max, grid.side() / 4.0) : grid.side() / 4.0;
    const double tol = 1e-9 * grid.dt();
    const int ns = std::max(1, window.node_stride);
    for (std::size_t k = 0; k < col.field.count(); ++k) {
        const int level = col.field.level_at(k);
        if ((level - col.field.first_level()) % std::max(1, window.level_stride) != 0) continue;
        const double tau = grid.time(level) - s;
        if (tau < tau_min - tol || tau > window.tau_max + tol) continue;
        const SpaceField& v = col.field.slice(k);
        for (std::size_t p = 0; p < grid.nodes(); ++p) {
            const auto c = grid.node_coords(p);
            if (c[0] % ns != 0 || c[1] % ns != 0) continue;
            const double d = grid.torus_distance(grid.position(p), col.source.Y.x);
            if (d > dist_max || d * d / tau > window.max_similarity) continue;
            double mag = 0.0;
            for (int i = 0; i < v.components(); ++i) mag += v(p, i) * v(p, i);
            mag = std::sqrt(mag);
            if (!(mag > window.noise_floor)) continue;
            out.push_back({tau, d, mag});
        }
    }
    return out;
}

GaussianFit gaussian_fit(const Grid& grid, const std::vector<const FundSolColumn*>& columns, const FitWindow& window)
{
    std::vector<FitPoint> pts;
    for (const auto* col : columns) {
        auto p = collect_fit_points(grid, *col, window);
        pts.insert(pts.end(), p.begin(), p.end());
    }
    auto fit = gaussian_fit(grid.dim(), pts);
    fit.window = window;
    return fit;
}

BoundVerdict bound_verdict(const GaussianFit& fit, const BoundConstants& consts)
{
    BoundVerdict v;
    v.kappa_fit = fit.kappa_fit;
    v.kappa_bound = consts.kappa;
    v.kappa_margin = fit.kappa_fit / consts.kappa;
    v.C_sup = fit.C_sup;
    v.pass = fit.kappa_fit >= consts.kappa && std::isfinite(fit.C_sup);
    v.verdict = v.pass ? "PASS" : "FAIL";
    return v;
}

} // namespace parabolic
