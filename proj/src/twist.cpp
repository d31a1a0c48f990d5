#include "parabolic/twist.hpp"

#include <cmath>

#include "parabolic/errors.hpp"

namespace parabolic {

double twist_ramp(double s, double D, double period)
{
    if (D <= 0.0) return 0.0;
    s = std::fmod(s, period);
    if (s < 0.0) s += period;
    const double plateau = 0.25 * (period - D);
    const double down = 0.5 * (period - D);
    if (s <= 0.5 * D) return 2.0 * s * s / D;
    if (s <= D) return D - 2.0 * (D - s) * (D - s) / D;
    if (s <= D + plateau) return D;
    const double q = s - D - plateau;
    if (q <= 0.5 * down) return D - 2.0 * D * q * q / (down * down);
    if (q <= down) return 2.0 * D * (down - q) * (down - q) / (down * down);
    return 0.0;
}

double TwistFunction::value_at(const Grid& grid, const Point& z) const
{
    if (!anchored) return 0.0;
    Point d{0.0, 0.0};
    double norm = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
        d[a] = grid.wrap_delta(x[a], y[a]);
        norm += d[a] * d[a];
    }
    norm = std::sqrt(norm);
    double v = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
        const double D = std::abs(d[a]);
        if (D == 0.0) continue;
        const double s = d[a] > 0.0 ? z[a] - y[a] : y[a] - z[a];
        v += (D / norm) * twist_ramp(s, D, grid.side());
    }
    return 0.5 * gamma_nominal * v;
}

TwistBounds measure_twist(const Grid& grid, const std::vector<double>& psi)
{
    if (psi.size() != grid.nodes()) throw LabError(ErrorKind::ShapeMismatch, "twist must be a scalar node field");
    const double h = grid.h();
    const int n = grid.dim();
    TwistBounds out;
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        double fwd = 0.0, bwd = 0.0, cen = 0.0, hess = 0.0;
        for (int a = 0; a < n; ++a) {
            const double vp = psi[grid.neighbor(p, a, +1)];
            const double vm = psi[grid.neighbor(p, a, -1)];
            fwd += (vp - psi[p]) * (vp - psi[p]) / (h * h);
            bwd += (psi[p] - vm) * (psi[p] - vm) / (h * h);
            cen += (vp - vm) * (vp - vm) / (4.0 * h * h);
            for (int b = 0; b < n; ++b) {
                double d2;
                if (a == b) {
                    d2 = (vp - 2.0 * psi[p] + vm) / (h * h);
                } else {
                    const auto pa = grid.neighbor(p, a, +1);
                    const auto pb = grid.neighbor(p, b, +1);
                    const auto pab = grid.neighbor(pa, b, +1);
                    d2 = (psi[pab] - psi[pa] - psi[pb] + psi[p]) / (h * h);
                }
                hess += d2 * d2;
            }
        }
        out.gradient = std::max({out.gradient, std::sqrt(fwd), std::sqrt(bwd), std::sqrt(cen)});
        out.hessian = std::max(out.hessian, std::sqrt(hess));
    }
    return out;
}

TwistFunction build_twist(const Grid& grid, const Point& x, const Point& y, double gamma)
{
    const double dist = grid.torus_distance(x, y);
    if (dist < 4.0 * grid.h()) throw LabError(ErrorKind::AnchorsTooClose, "twist anchors closer than 4h");
    if (dist > grid.side() / 4.0) throw LabError(ErrorKind::WrapViolation, "twist anchors farther apart than L/4");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw LabError(ErrorKind::RangeError, "gamma must be finite and >= 0");
    TwistFunction tw;
    tw.x = x;
    tw.y = y;
    tw.anchored = true;
    tw.gamma_nominal = gamma;
    tw.delta_nominal = 4.0 * gamma / dist;
    tw.psi.resize(grid.nodes());
    for (std::size_t p = 0; p < grid.nodes(); ++p) tw.psi[p] = tw.value_at(grid, grid.position(p));
    const auto meas = measure_twist(grid, tw.psi);
    tw.gamma_measured = meas.gradient;
    tw.delta_measured = meas.hessian;
    tw.gamma = std::max(tw.gamma_nominal, tw.gamma_measured);
    tw.delta = std::max(tw.delta_nominal, tw.delta_measured);
    return tw;
}

TwistFunction twist_from_values(const Grid& grid, std::vector<double> psi)
{
    TwistFunction tw;
    const auto meas = measure_twist(grid, psi);
    tw.psi = std::move(psi);
    tw.gamma = tw.gamma_measured = meas.gradient;
    tw.delta = tw.delta_measured = meas.hessian;
    return tw;
}

} // namespace parabolic
