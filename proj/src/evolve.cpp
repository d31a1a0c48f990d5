#include "parabolic/evolve.hpp"

#include <algorithm>

#include "parabolic/errors.hpp"
#include "parabolic/kernels.hpp"

namespace parabolic {

namespace {

void record(RunStats& stats, const SolveInfo& info)
{
    stats.max_residual = std::max(stats.max_residual, info.relative_residual);
    ++stats.solves;
    stats.iterations += info.iterations;
}

bool keep(const RunControl& control, int offset) { return control.store && offset % control.store_stride == 0; }

void check_control(const RunControl& control)
{
    if (control.store_stride < 1) throw LabError(ErrorKind::ConfigError, "store_stride must be >= 1");
}

} // namespace

Forcing forcing_from(const SpaceTimeField& f)
{
    return [&f](int level, SpaceField& out) {
        const SpaceField* s = f.find(level);
        if (s == nullptr) return false;
        out.values() = s->values();
        return true;
    };
}

Evolver::Evolver(const Grid& grid, const CoefficientSet& coeffs, EvolveOptions options)
    : grid_(&grid), coeffs_(&coeffs), options_(options)
{
    (void)coeffs.constants();
    operators_.reserve(coeffs.slice_count());
    systems_.reserve(coeffs.slice_count());
    for (std::size_t k = 0; k < coeffs.slice_count(); ++k) {
        operators_.push_back(assemble(grid, coeffs, k));
        systems_.emplace_back(operators_.back().total, grid.dt(), options_.theta, options_.solver);
    }
}

Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;

const DiscreteOperator& Evolver::operator_for_level(int level) const
{
    return operators_[coeffs_->slice_index(level)];
}

const StepSystem& Evolver::system_for_level(int level) const { return systems_[coeffs_->slice_index(level)]; }

Solution Evolver::run_levels(const SpaceField& initial, int first, int last, const Forcing& f,
                             const RunControl& control) const
{
    check_control(control);
    if (initial.size() != grid_->size()) throw LabError(ErrorKind::ShapeMismatch, "initial field has the wrong size");
    if (first < 0 || last >= grid_->levels() || last < first)
        throw LabError(ErrorKind::TimeRangeError, "level range outside the grid");
    Solution out;
    out.field = SpaceTimeField(first, control.store_stride);
    SpaceField u = initial;
    SpaceField rhs(*grid_);
    SpaceField fbuf(*grid_);
    if (control.observer) control.observer(first, u);
    if (keep(control, 0)) out.field.push_back(u);
    const double dt = grid_->dt();
    for (int j = first + 1; j <= last; ++j) {
        const StepSystem& sys = system_for_level(j);
        sys.apply_explicit(u.span(), rhs.span());
        if (f) {
            fbuf.fill(0.0);
            if (f(j, fbuf)) kernels::axpy(dt, fbuf.span(), rhs.span());
        }
        record(out.stats, sys.solve(rhs.span(), u.span()));
        if (control.observer) control.observer(j, u);
        if (keep(control, j - first)) out.field.push_back(u);
    }
    return out;
}

Solution Evolver::solve_cauchy(const SpaceField& g, double s, double t_end, const RunControl& control) const
{
    if (!g.all_finite()) throw LabError(ErrorKind::NonFinite, "initial data has non-finite entries");
    if (t_end < s) throw LabError(ErrorKind::TimeRangeError, "solve_cauchy needs s <= T");
    return run_levels(g, grid_->level_of(s), grid_->level_of(t_end), Forcing{}, control);
}

Solution Evolver::solve_forced(const Forcing& f, double s0, double t_end, const RunControl& control) const
{
    if (t_end < s0) throw LabError(ErrorKind::TimeRangeError, "solve_forced needs s0 <= T");
    return run_levels(SpaceField(*grid_), grid_->level_of(s0), grid_->level_of(t_end), f, control);
}

Solution Evolver::solve_adjoint(const Forcing& f, double t0, double t_begin, const RunControl& control) const
{
    check_control(control);
    if (t_begin > t0) throw LabError(ErrorKind::TimeRangeError, "solve_adjoint needs t_begin <= t0");
    const int last = grid_->level_of(t0);
    const int first = grid_->level_of(t_begin);
    const double dt = grid_->dt();

    Solution out;
    std::vector<SpaceField> stored;
    SpaceField u(*grid_);      // U^{l+1}, zero past t0
    SpaceField rhs(*grid_);
    SpaceField fbuf(*grid_);
    for (int l = last; l >= first; --l) {
        // rhs = dt g^l + N_{l+1}^T U^{l+1}
        if (l < last) {
            system_for_level(l + 1).apply_explicit_transpose(u.span(), rhs.span());
        } else {
            rhs.fill(0.0);
        }
        if (f) {
            fbuf.fill(0.0);
            if (f(l, fbuf)) kernels::axpy(dt, fbuf.span(), rhs.span());
        }
        record(out.stats, system_for_level(l).solve_transpose(rhs.span(), u.span()));
        if (control.observer) control.observer(l, u);
        if (keep(control, l - first)) stored.push_back(u);
    }
    out.field = SpaceTimeField(first, control.store_stride);
    for (auto it = stored.rbegin(); it != stored.rend(); ++it) out.field.push_back(std::move(*it));
    return out;
}

} // namespace parabolic
