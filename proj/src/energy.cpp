#include "parabolic/energy.hpp"

#include <cmath>
#include <limits>

#include "parabolic/kernels.hpp"
#include "parabolic/norms.hpp"

namespace parabolic {

namespace {

double quad_form(const CsrMatrix& a, const SpaceField& u, std::vector<double>& scratch)
{
    kernels::spmv(a, u.span(), scratch);
    return kernels::dot(u.span(), scratch);
}

} // namespace

EnergyReport energy_check(const Evolver& evolver, const SpaceField& g, const Forcing& f, double s, double t_end)
{
    const Grid& grid = evolver.grid();
    const int n = grid.dim();
    const double w = grid.cell_volume();
    const double dt = grid.dt();
    const double p_force = (2.0 * n + 4.0) / (n + 4.0);
    const double p_embed = 2.0 + 2.0 / n;
    const int first = grid.level_of(s);

    EnergyReport rep;
    V2Accumulator v2(grid);
    double f_lp_sum = 0.0;
    double embed_sum = 0.0;
    std::vector<double> scratch(grid.size());
    SpaceField prev = g;
    SpaceField fbuf(grid);

    auto observer = [&](int level, const SpaceField& u) {
        if (level == first) {
            v2.add(u, 0.0);
            return;
        }
        v2.add(u, dt);
        const auto& op = evolver.operator_for_level(level);
        rep.diffusion_work += 2.0 * dt * w * quad_form(op.diffusion, u, scratch);
        rep.drift_work += 2.0 * dt * w * quad_form(op.drift, u, scratch);
        rep.zeroth_work += 2.0 * dt * w * quad_form(op.zeroth, u, scratch);
        double diff_sq = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double d = u.values()[k] - prev.values()[k];
            diff_sq += d * d;
        }
        rep.numerical_dissipation += w * diff_sq;
        if (f) {
            fbuf.fill(0.0);
            if (f(level, fbuf)) {
                rep.forcing_work += 2.0 * dt * w * kernels::dot(fbuf.span(), u.span());
                for (std::size_t p = 0; p < grid.nodes(); ++p) {
                    double sq = 0.0;
                    for (int i = 0; i < grid.components(); ++i) sq += fbuf(p, i) * fbuf(p, i);
                    f_lp_sum += std::pow(std::sqrt(sq), p_force) * w * dt;
                }
            }
        }
        for (std::size_t p = 0; p < grid.nodes(); ++p) {
            double sq = 0.0;
            for (int i = 0; i < grid.components(); ++i) sq += u(p, i) * u(p, i);
            embed_sum += std::pow(std::sqrt(sq), p_embed) * w * dt;
        }
        prev = u;
    };
    RunControl control;
    control.store = false;
    control.observer = observer;
    const int last = grid.level_of(t_end);
    evolver.run_levels(g, first, last, f, control);

    rep.v2 = v2.value();
    rep.g_l2 = std::sqrt(l2_sq(grid, g));
    rep.f_lp = std::pow(f_lp_sum, 1.0 / p_force);
    rep.rhs = rep.g_l2 + rep.f_lp;
    rep.final_l2_sq = l2_sq(grid, prev);
    if (rep.rhs == 0.0) {
        rep.zero_input = true;
        rep.ratio = 0.0;
    } else {
        rep.ratio = rep.v2 / rep.rhs;
    }
    rep.embedding_ratio = rep.v2 > 0.0 ? std::pow(embed_sum, 1.0 / p_embed) / rep.v2 : 0.0;

    const double lhs = rep.final_l2_sq + rep.diffusion_work + rep.drift_work + rep.zeroth_work + rep.numerical_dissipation;
    const double source = rep.g_l2 * rep.g_l2 + rep.forcing_work;
    if (evolver.options().theta != 1.0) {
        rep.balance_residual = std::numeric_limits<double>::quiet_NaN();
        rep.balance_ratio = std::numeric_limits<double>::quiet_NaN();
    } else {
        const double scale = rep.g_l2 * rep.g_l2 + std::abs(rep.forcing_work);
        rep.balance_residual = scale > 0.0 ? std::abs(lhs - source) / scale : 0.0;
        rep.balance_ratio = source != 0.0 ? (lhs - rep.drift_work) / source : 0.0;
    }
    return rep;
}

} // namespace parabolic
