#include "parabolic/oracle.hpp"

#include <cmath>
#include <numbers>

#include "parabolic/errors.hpp"

namespace parabolic {

double periodic_heat_1d(double a, double tau, double dx, double side)
{
    const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * a * tau);
    const double inv = 1.0 / (4.0 * a * tau);
    double sum = norm * std::exp(-dx * dx * inv);
    for (int k = 1;; ++k) {
        const double xp = dx + k * side;
        const double xm = dx - k * side;
        const double term = norm * (std::exp(-xp * xp * inv) + std::exp(-xm * xm * inv));
        sum += term;
        if (term <= 1e-14 * sum || k > 10000) break;
    }
    return sum;
}

namespace {

double heat_value(double a, const Grid& grid, double tau, const Point& d)
{
    double v = 1.0;
    for (int ax = 0; ax < grid.dim(); ++ax) v *= periodic_heat_1d(a, tau, d[ax], grid.side());
    return v;
}

} // namespace

std::vector<double> oracle_eval(const OracleKernel& k, const Grid& grid, double t, const Point& x, double s,
                                const Point& y)
{
    const int m = grid.components();
    std::vector<double> out(static_cast<std::size_t>(m * m), 0.0);
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i * m + i)] = oracle_scalar(k, grid, t, x, s, y, i);
    return out;
}

double oracle_scalar(const OracleKernel& k, const Grid& grid, double t, const Point& x, double s, const Point& y,
                     int component)
{
    if (!(t > s)) throw LabError(ErrorKind::NonCausal, "oracle kernels need t > s");
    const double tau = t - s;
    Point d{0.0, 0.0};
    for (int ax = 0; ax < grid.dim(); ++ax) d[ax] = grid.wrap_delta(x[ax], y[ax]);
    switch (k.kind) {
    case OracleKernel::Kind::heat:
        return heat_value(k.a, grid, tau, d);
    case OracleKernel::Kind::drifted_heat:
        for (int ax = 0; ax < grid.dim(); ++ax) d[ax] = grid.wrap_delta(d[ax] - k.b[ax] * tau, 0.0);
        return heat_value(k.a, grid, tau, d);
    case OracleKernel::Kind::decoupled_system: {
        const double a = static_cast<std::size_t>(component) < k.diffusivities.size() ? k.diffusivities[component] : k.a;
        return heat_value(a, grid, tau, d);
    }
    }
    return 0.0;
}

double oracle_averaged(const OracleKernel& k, const Grid& grid, double t, const Point& x,
                       const std::vector<SpaceTimeIndex>& source, int component)
{
    if (source.empty()) throw LabError(ErrorKind::SourceOutOfRange, "empty source set");
    double sum = 0.0;
    for (const auto& q : source) {
        const double s = grid.time(q.level) - 0.5 * grid.dt();
        sum += oracle_scalar(k, grid, t, x, s, grid.position(q.node), component);
    }
    return sum / static_cast<double>(source.size());
}

} // namespace parabolic
