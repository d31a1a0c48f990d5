#include "parabolic/lattice.hpp"

#include <cmath>
#include <sstream>

#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

constexpr double kTimeSnap = 1e-9;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace

Grid Grid::make(int dim, int components, double side, int cells, double dt, double t0, double t1)
{
    std::ostringstream why;
    if (dim != 1 && dim != 2) why << "dim must be 1 or 2 (got " << dim << "); ";
    if (components < 1) why << "components must be >= 1; ";
    if (!(side > 0.0) || !std::isfinite(side)) why << "side must be positive; ";
    if (cells < 8 || !is_power_of_two(cells)) why << "cells must be a power of two >= 8; ";
    if (!(dt > 0.0) || !std::isfinite(dt)) why << "dt must be positive; ";
    if (!(t1 > t0)) why << "t1 must exceed t0; ";
    if (!why.str().empty()) throw LabError(ErrorKind::InvalidGrid, why.str());

    Grid g;
    g.dim_ = dim;
    g.components_ = components;
    g.side_ = side;
    g.cells_ = cells;
    g.dt_ = dt;
    g.t0_ = t0;
    g.t1_ = t1;
    g.nodes_ = dim == 1 ? static_cast<std::size_t>(cells)
                        : static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells);
    g.levels_ = static_cast<int>(std::floor((t1 - t0) / dt + kTimeSnap)) + 1;
    return g;
}

double Grid::cell_volume() const noexcept { return dim_ == 1 ? h() : h() * h(); }

int Grid::level_of(double t) const
{
    const double x = (t - t0_) / dt_;
    const double r = std::round(x);
    if (std::abs(x - r) > kTimeSnap * std::max(1.0, std::abs(x)) || r < 0 || r >= levels_) {
        std::ostringstream os;
        os << "time " << t << " is not a grid level in [" << t0_ << ", " << time(levels_ - 1) << "]";
        throw LabError(ErrorKind::TimeRangeError, os.str());
    }
    return static_cast<int>(r);
}

int Grid::level_floor(double t) const noexcept
{
    const double x = (t - t0_) / dt_;
    int l = static_cast<int>(std::floor(x + kTimeSnap));
    if (l < 0) l = 0;
    if (l >= levels_) l = levels_ - 1;
    return l;
}

std::array<int, 2> Grid::node_coords(std::size_t p) const noexcept
{
    const auto c = static_cast<std::size_t>(cells_);
    return {static_cast<int>(p % c), dim_ == 2 ? static_cast<int>(p / c) : 0};
}

std::size_t Grid::node_at(int ix, int iy) const noexcept
{
    const int n = cells_;
    ix = ((ix % n) + n) % n;
    iy = dim_ == 2 ? ((iy % n) + n) % n : 0;
    return static_cast<std::size_t>(ix) + static_cast<std::size_t>(n) * static_cast<std::size_t>(iy);
}

std::size_t Grid::neighbor(std::size_t p, int axis, int shift) const noexcept
{
    auto c = node_coords(p);
    c[axis] += shift;
    return node_at(c[0], c[1]);
}

Point Grid::position(std::size_t p) const noexcept
{
    const auto c = node_coords(p);
    return {c[0] * h(), dim_ == 2 ? c[1] * h() : 0.0};
}

double Grid::wrap_delta(double a, double b) const noexcept
{
    double d = std::fmod(a - b, side_);
    if (d >= 0.5 * side_) d -= side_;
    if (d < -0.5 * side_) d += side_;
    return d;
}

double Grid::torus_distance(const Point& a, const Point& b) const noexcept
{
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
        const double d = wrap_delta(a[k], b[k]);
        s += d * d;
    }
    return std::sqrt(s);
}

double parabolic_distance(const Grid& grid, const SpaceTimePoint& a, const SpaceTimePoint& b)
{
    return std::max(std::sqrt(std::abs(a.t - b.t)), grid.torus_distance(a.x, b.x));
}

double ParabolicCylinder::t_begin() const noexcept
{
    return kind == CylinderKind::forward ? center.t : center.t - radius * radius;
}

double ParabolicCylinder::t_end() const noexcept
{
    return kind == CylinderKind::backward ? center.t : center.t + radius * radius;
}

bool ParabolicCylinder::contains(const Grid& grid, const SpaceTimePoint& p) const
{
    const double slack = kTimeSnap * grid.dt();
    if (p.t < t_begin() - slack || p.t > t_end() + slack) return false;
    return grid.torus_distance(p.x, center.x) <= radius * (1.0 + 1e-12);
}

void require_resolvable(const Grid& grid, double radius)
{
    if (!(radius >= 2.0 * grid.h() * (1.0 - 1e-12)) ||
        !(radius * radius >= 2.0 * grid.dt() * (1.0 - 1e-12))) {
        std::ostringstream os;
        os << "radius " << radius << " needs r >= 2h = " << 2.0 * grid.h()
           << " and r^2 >= 2dt = " << 2.0 * grid.dt();
        throw LabError(ErrorKind::UnresolvableCylinder, os.str());
    }
}

std::vector<std::size_t> ball_nodes(const Grid& grid, const Point& center, double radius)
{
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        if (grid.torus_distance(grid.position(p), center) <= radius * (1.0 + 1e-12)) out.push_back(p);
    }
    return out;
}

std::vector<SpaceTimeIndex> cylinder_indices(const ParabolicCylinder& cyl, const Grid& grid)
{
    require_resolvable(grid, cyl.radius);
    const auto ball = ball_nodes(grid, cyl.center.x, cyl.radius);
    const double slack = kTimeSnap * grid.dt();
    const int first = std::max(0, static_cast<int>(std::ceil((cyl.t_begin() - slack - grid.t0()) / grid.dt())));
    const int last = std::min(grid.levels() - 1,
                              static_cast<int>(std::floor((cyl.t_end() + slack - grid.t0()) / grid.dt())));
    std::vector<SpaceTimeIndex> out;
    for (int l = first; l <= last; ++l) {
        for (auto p : ball) out.push_back({l, p});
    }
    return out;
}

bool SpaceField::all_finite() const noexcept
{
    for (double v : values_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

const SpaceField* SpaceTimeField::find(int level) const noexcept
{
    if (slices_.empty() || level < first_level_) return nullptr;
    const int d = level - first_level_;
    if (d % stride_ != 0) return nullptr;
    const auto k = static_cast<std::size_t>(d / stride_);
    return k < slices_.size() ? &slices_[k] : nullptr;
}

bool SpaceTimeField::all_finite() const noexcept
{
    for (const auto& s : slices_) {
        if (!s.all_finite()) return false;
    }
    return true;
}

} // namespace parabolic
