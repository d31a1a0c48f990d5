#include "parabolic/davies.hpp"

#include <cmath>
#include <limits>

#include "parabolic/errors.hpp"
#include "parabolic/norms.hpp"

namespace parabolic {

BoundConstants bound_constants(double lambda, double Lambda, double Theta, double C0)
{
    const bool finite = std::isfinite(lambda) && std::isfinite(Lambda) && std::isfinite(Theta) && std::isfinite(C0);
    if (!finite || !(lambda > 0.0) || Lambda < lambda * (1.0 - 1e-12) || Theta < 0.0 || !(C0 > 0.0))
        throw LabError(ErrorKind::InvalidConstants, "need lambda > 0, Lambda >= lambda, Theta >= 0, C0 > 0");
    BoundConstants c;
    c.lambda = lambda;
    c.Lambda = Lambda;
    c.Theta = Theta;
    c.C0 = C0;
    c.nu = 0.5 * (4.0 * Lambda * Lambda / lambda + C0 * C0 * Theta * Theta / lambda + 2.0 * C0 * Theta);
    c.mu = 0.5 * C0 * Theta;
    c.kappa = 1.0 / (32.0 * c.nu);
    return c;
}

namespace {

void scale_by_exp(const std::vector<double>& psi, double sign, SpaceField& u)
{
    const int m = u.components();
    for (std::size_t p = 0; p < psi.size(); ++p) {
        const double w = std::exp(sign * psi[p]);
        for (int i = 0; i < m; ++i) u(p, i) *= w;
    }
}

} // namespace

DaviesRun davies_evolve(const Evolver& evolver, const TwistFunction& twist, const SpaceField& f, double s, double t)
{
    const Grid& grid = evolver.grid();
    if (twist.psi.size() != grid.nodes()) throw LabError(ErrorKind::ShapeMismatch, "twist does not match the grid");
    if (!f.all_finite()) throw LabError(ErrorKind::NonFinite, "Davies data has non-finite entries");
    if (!(t > s)) throw LabError(ErrorKind::TimeRangeError, "davies_evolve needs s < t");

    DaviesRun run;
    SpaceField g = f;
    scale_by_exp(twist.psi, -1.0, g);
    const int first = grid.level_of(s);
    RunControl control;
    control.store = false;
    SpaceField w(grid);
    control.observer = [&](int level, const SpaceField& u) {
        run.times.push_back(grid.time(level));
        if (level == first) {
            run.I.push_back(l2_sq(grid, f));
            return;
        }
        w.values() = u.values();
        scale_by_exp(twist.psi, 1.0, w);
        run.I.push_back(l2_sq(grid, w));
    };
    auto sol = evolver.solve_cauchy(g, s, t, control);
    run.stats = sol.stats;
    run.result = w;
    return run;
}

GrowthReport twist_growth_report(const DaviesRun& run, const BoundConstants& consts, double gamma, double delta,
                                 double tolerance)
{
    GrowthReport rep;
    rep.rate = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < run.I.size(); ++k) {
        const double dt = run.times[k] - run.times[k - 1];
        rep.rate = std::max(rep.rate, std::log(run.I[k] / run.I[k - 1]) / (2.0 * dt));
    }
    rep.budget = consts.nu * gamma * gamma + consts.mu * delta;
    rep.margin = rep.budget - rep.rate;
    rep.tolerance = tolerance;
    rep.pass = std::isfinite(rep.rate) && rep.rate <= rep.budget + tolerance;
    return rep;
}

} // namespace parabolic
