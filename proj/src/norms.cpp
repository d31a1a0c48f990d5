#include "parabolic/norms.hpp"

#include <cmath>

#include "parabolic/errors.hpp"

namespace parabolic {

double centered_gradient_sq(const Grid& grid, const SpaceField& u, std::size_t p)
{
    const int m = grid.components();
    const double inv2h = 1.0 / (2.0 * grid.h());
    double s = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
        const auto fwd = grid.neighbor(p, axis, +1);
        const auto bwd = grid.neighbor(p, axis, -1);
        for (int i = 0; i < m; ++i) {
            const double d = (u(fwd, i) - u(bwd, i)) * inv2h;
            s += d * d;
        }
    }
    return s;
}

double l2_sq(const Grid& grid, const SpaceField& u)
{
    double s = 0.0;
    for (double v : u.values()) s += v * v;
    return s * grid.cell_volume();
}

V2Parts v2_parts(const Grid& grid, const SpaceTimeField& u, const NodePredicate& select)
{
    V2Parts out;
    const int m = grid.components();
    const double w_space = grid.cell_volume();
    const double w_time = grid.dt() * u.stride();
    for (std::size_t k = 0; k < u.count(); ++k) {
        const int level = u.level_at(k);
        const SpaceField& f = u.slice(k);
        double slice_sq = 0.0;
        double grad = 0.0;
        for (std::size_t p = 0; p < grid.nodes(); ++p) {
            if (select && !select(level, p)) continue;
            double node_sq = 0.0;
            for (int i = 0; i < m; ++i) node_sq += f(p, i) * f(p, i);
            slice_sq += node_sq;
            out.linf = std::max(out.linf, std::sqrt(node_sq));
            grad += centered_gradient_sq(grid, f, p);
        }
        slice_sq *= w_space;
        out.sup_sq = std::max(out.sup_sq, slice_sq);
        out.l2_sq += slice_sq * w_time;
        out.grad_sq += grad * w_space * w_time;
    }
    return out;
}

FieldNorms field_norms(const Grid& grid, const SpaceTimeField& u,
                       const std::optional<ParabolicCylinder>& region)
{
    NodePredicate select;
    if (region) {
        require_resolvable(grid, region->radius);
        const ParabolicCylinder cyl = *region;
        select = [&grid, cyl](int level, std::size_t p) {
            return cyl.contains(grid, {grid.time(level), grid.position(p)});
        };
    }
    const V2Parts parts = v2_parts(grid, u, select);
    return {std::sqrt(parts.l2_sq), parts.linf, std::sqrt(parts.grad_sq + parts.sup_sq)};
}

void V2Accumulator::add(const SpaceField& u, double time_weight)
{
    double grad = 0.0;
    for (std::size_t p = 0; p < grid_->nodes(); ++p) grad += centered_gradient_sq(*grid_, u, p);
    grad_sq_ += grad * grid_->cell_volume() * time_weight;
    sup_sq_ = std::max(sup_sq_, l2_sq(*grid_, u));
}

double V2Accumulator::value() const noexcept { return std::sqrt(grad_sq_ + sup_sq_); }

} // namespace parabolic
