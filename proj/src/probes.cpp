#include "parabolic/probes.hpp"

#include <cmath>

#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

double node_norm(const SpaceField& v, std::size_t p)
{
    double s = 0.0;
    for (int i = 0; i < v.components(); ++i) s += v(p, i) * v(p, i);
    return std::sqrt(s);
}

std::size_t nearest_node(const Grid& grid, const Point& x)
{
    const double h = grid.h();
    const int ix = static_cast<int>(std::lround(x[0] / h));
    const int iy = grid.dim() == 2 ? static_cast<int>(std::lround(x[1] / h)) : 0;
    return grid.node_at(ix, iy);
}

} // namespace

PointwiseProbe pointwise_bound_probe(const Grid& grid, const FundSolColumn& col,
                                     const std::vector<SpaceTimePoint>& points)
{
    const SpaceTimePoint& Y = col.source.Y;
    const double eps = col.source.eps;
    PointwiseProbe out;
    for (const auto& X : points) {
        const int level = grid.level_floor(X.t + 0.5 * grid.dt());
        const std::size_t p = nearest_node(grid, X.x);
        const SpaceTimePoint snapped{grid.time(level), grid.position(p)};
        if (level <= col.set.start_level) {
            ++out.evaluated;
            continue;
        }
        const double d = parabolic_distance(grid, snapped, Y);
        if (eps > d / 3.0 || d > grid.side() / 4.0)
            throw LabError(ErrorKind::ProbeOutOfRange, "probe point outside eps <= |X-Y|_p / 3, |X-Y|_p <= L/4");
        const SpaceField* v = col.field.find(level);
        if (v == nullptr) throw LabError(ErrorKind::ProbeOutOfRange, "probe level not stored in the column");
        const double value = node_norm(*v, p) * std::pow(d, grid.dim());
        ++out.evaluated;
        if (value > out.sup) {
            out.sup = value;
            out.argmax = snapped;
        }
    }
    return out;
}

std::vector<SpaceTimePoint> probe_set(const Grid& grid, const SpaceTimePoint& Y, double d_min, double d_max, int radii)
{
    if (radii < 1 || !(d_min > 0.0) || d_max < d_min) throw LabError(ErrorKind::RangeError, "bad probe radius range");
    std::vector<SpaceTimePoint> out;
    const auto snap = [&](double t, Point x) {
        const int level = grid.level_floor(t + 0.5 * grid.dt());
        return SpaceTimePoint{grid.time(level), grid.position(nearest_node(grid, x))};
    };
    for (int r = 0; r < radii; ++r) {
        const double d = radii == 1 ? d_min : d_min * std::pow(d_max / d_min, static_cast<double>(r) / (radii - 1));
        out.push_back(snap(Y.t + d * d, Y.x));
        for (int ax = 0; ax < grid.dim(); ++ax) {
            Point x = Y.x;
            x[ax] += d;
            out.push_back(snap(Y.t + 0.25 * d * d, x));
            out.push_back(snap(Y.t + d * d, x));
        }
    }
    // Snapping can pull a point below d_min; drop those.
    std::erase_if(out, [&](const SpaceTimePoint& X) {
        const double d = parabolic_distance(grid, X, Y);
        return d < d_min * (1.0 - 1e-12) || d > d_max * (1.0 + 1e-12);
    });
    return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw LabError(ErrorKind::DegenerateFit, "all abscissae coincide");
    return sxy / sxx;
}

ScalingProbe energy_scaling_probe(const ProblemFactory& make, const SpaceTimePoint& Y, int k,
                                  const std::vector<double>& eps, double horizon_factor, int steps_per_eps_sq)
{
    if (eps.size() < 3) throw LabError(ErrorKind::RangeError, "energy scaling needs at least 3 eps values");
    ScalingProbe out;
    for (double e : eps) {
        const double dt = e * e / steps_per_eps_sq;
        const double t0 = Y.t - e * e;
        const double t1 = Y.t + horizon_factor * e * e;
        auto prob = make(dt, t0, t1);
        const Grid& grid = prob->grid;
        V2Accumulator acc(grid);
        RunControl control;
        control.store = false;
        control.observer = [&](int, const SpaceField& v) { acc.add(v, grid.dt()); };
        SourceSpec src{{grid.time(grid.level_of(Y.t)), Y.x}, k, e};
        averaged_fundsol(*prob->evolver, src, grid.time(grid.levels() - 1), control);
        out.eps.push_back(e);
        out.norms.push_back(acc.value());
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        lx.push_back(std::log(out.eps[i]));
        ly.push_back(std::log(out.norms[i]));
    }
    out.slope = fit_slope(lx, ly);
    return out;
}

DecayAccumulator::DecayAccumulator(const Grid& grid, const SourceSpec& src, std::vector<double> radii, int stride)
    : grid_(&grid), src_(src), radii_(std::move(radii)), stride_(stride), grad_sq_(radii_.size(), 0.0),
      sup_sq_(radii_.size(), 0.0)
{
    if (radii_.empty()) throw LabError(ErrorKind::RangeError, "no decay radii");
    for (double R : radii_) {
        if (R < 12.0 * src.eps * (1.0 - 1e-12) || R > grid.side() / 4.0 * (1.0 + 1e-12))
            throw LabError(ErrorKind::RangeError, "decay radii must satisfy 12 eps <= R <= L/4");
    }
}

void DecayAccumulator::add(int level, const SpaceField& v)
{
    const Grid& g = *grid_;
    const double t = g.time(level);
    const double w = g.cell_volume();
    const double tw = w * g.dt() * stride_;
    for (std::size_t r = 0; r < radii_.size(); ++r) {
        const ParabolicCylinder q{src_.Y, radii_[r], CylinderKind::two_sided};
        const bool time_inside = t >= q.t_begin() && t <= q.t_end();
        double grad = 0.0;
        double l2 = 0.0;
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            if (time_inside && g.torus_distance(g.position(p), src_.Y.x) <= radii_[r]) continue;
            grad += centered_gradient_sq(g, v, p);
            for (int i = 0; i < v.components(); ++i) l2 += v(p, i) * v(p, i);
        }
        grad_sq_[r] += grad * tw;
        sup_sq_[r] = std::max(sup_sq_[r], l2 * w);
    }
}

std::vector<DecayRow> DecayAccumulator::rows() const
{
    std::vector<DecayRow> out;
    for (std::size_t r = 0; r < radii_.size(); ++r) {
        const double norm = std::sqrt(grad_sq_[r] + sup_sq_[r]);
        out.push_back({radii_[r], norm, std::pow(radii_[r], 0.5 * grid_->dim()) * norm});
    }
    return out;
}

std::vector<DecayRow> decay_probe(const Grid& grid, const FundSolColumn& col, const std::vector<double>& radii)
{
    DecayAccumulator acc(grid, col.source, radii, col.field.stride());
    for (std::size_t k = 0; k < col.field.count(); ++k) acc.add(col.field.level_at(k), col.field.slice(k));
    return acc.rows();
}

double l1_forward_cylinder(const Grid& grid, const FundSolColumn& col, double R)
{
    const ParabolicCylinder q{col.source.Y, R, CylinderKind::forward};
    double sum = 0.0;
    for (std::size_t k = 0; k < col.field.count(); ++k) {
        const int level = col.field.level_at(k);
        const double t = grid.time(level);
        if (t < q.t_begin() || t > q.t_end()) continue;
        const SpaceField& v = col.field.slice(k);
        for (std::size_t p = 0; p < grid.nodes(); ++p)
            if (q.contains(grid, {t, grid.position(p)})) sum += node_norm(v, p);
    }
    return sum * grid.cell_volume() * grid.dt() * col.field.stride();
}

} // namespace parabolic
