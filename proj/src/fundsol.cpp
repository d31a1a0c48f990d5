#include "parabolic/fundsol.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "parabolic/errors.hpp"
#include "parabolic/kernels.hpp"
#include "parabolic/local_bound.hpp"
#include "parabolic/norms.hpp"

namespace parabolic {

std::vector<SpaceTimeIndex> SourceSet::indices() const
{
    std::vector<SpaceTimeIndex> out;
    out.reserve(levels.size() * nodes.size());
    for (int l : levels)
        for (auto p : nodes) out.push_back({l, p});
    return out;
}

SourceSet source_set(const Grid& grid, const SourceSpec& src)
{
    require_resolvable(grid, src.eps);
    if (src.k < 0 || src.k >= grid.components()) throw LabError(ErrorKind::RangeError, "column index out of range");
    const double tol = 1e-9 * grid.dt();
    const double s = src.Y.t;
    const double begin = s - src.eps * src.eps;
    if (begin < grid.t0() - tol || s > grid.time(grid.levels() - 1) + tol)
        throw LabError(ErrorKind::SourceOutOfRange, "source cylinder leaves the time range");
    SourceSet set;
    for (int l = 1; l < grid.levels(); ++l) {
        const double t = grid.time(l);
        if (t > begin + tol && t <= s + tol) set.levels.push_back(l);
    }
    if (set.levels.empty()) throw LabError(ErrorKind::SourceOutOfRange, "source cylinder covers no time level");
    set.start_level = set.levels.front() - 1;
    set.nodes = ball_nodes(grid, src.Y.x, src.eps);
    const double count = static_cast<double>(set.levels.size() * set.nodes.size());
    set.density = 1.0 / (count * grid.cell_volume() * grid.dt());
    return set;
}

Forcing source_forcing(const Grid& grid, const SourceSpec& src, const SourceSet& set)
{
    const int first = set.levels.front();
    const int last = set.levels.back();
    const int k = src.k;
    (void)grid;
    return [first, last, k, nodes = set.nodes, d = set.density](int level, SpaceField& out) {
        if (level < first || level > last) return false;
        for (auto p : nodes) out(p, k) = d;
        return true;
    };
}

FundSolColumn averaged_fundsol(const Evolver& evolver, const SourceSpec& src, double t_end, const RunControl& control)
{
    const Grid& grid = evolver.grid();
    FundSolColumn col;
    col.source = src;
    col.set = source_set(grid, src);
    const int last = grid.level_of(t_end);
    if (last < col.set.levels.back()) throw LabError(ErrorKind::TimeRangeError, "t_end lies before the source time");
    auto run = evolver.run_levels(SpaceField(grid), col.set.start_level, last, source_forcing(grid, src, col.set), control);
    col.field = std::move(run.field);
    col.stats = run.stats;
    return col;
}

double column_mass(const Grid& grid, const FundSolColumn& col, int level, int component)
{
    const SpaceField* s = col.field.find(level);
    if (s == nullptr) {
        if (level < col.set.start_level) return 0.0;
        throw LabError(ErrorKind::TimeRangeError, "level not stored in the column");
    }
    double sum = 0.0;
    for (std::size_t p = 0; p < grid.nodes(); ++p) sum += (*s)(p, component);
    return sum * grid.cell_volume();
}

DualityResult duality_check(const Evolver& evolver, const FundSolColumn& col, const Forcing& f, double floor)
{
    const Grid& grid = evolver.grid();
    if (col.field.stride() != 1) throw LabError(ErrorKind::ConfigError, "duality check needs every level stored");
    const int first = col.set.start_level + 1;
    const int last = col.field.last_level();
    if (last < first) throw LabError(ErrorKind::TimeRangeError, "column has no computed levels");

    DualityResult out;
    // Sums run in level order so both sides see the same association.
    SpaceField fbuf(grid);
    double lhs = 0.0;
    for (int l = first; l <= last; ++l) {
        fbuf.fill(0.0);
        if (!f || !f(l, fbuf)) continue;
        lhs += kernels::dot(col.field.find(l)->span(), fbuf.span());
    }
    out.lhs = lhs * grid.cell_volume() * grid.dt();

    RunControl keep_none;
    keep_none.store = false;
    double rhs = 0.0;
    std::size_t next = col.set.levels.size();
    keep_none.observer = [&](int level, const SpaceField& u) {
        // Levels arrive in descending order; pick out the source levels.
        if (next == 0 || col.set.levels[next - 1] != level) return;
        --next;
        double s = 0.0;
        for (auto p : col.set.nodes) s += u(p, col.source.k);
        rhs += s;
    };
    evolver.solve_adjoint(f, grid.time(last), grid.time(first), keep_none);
    out.rhs = rhs / static_cast<double>(col.set.levels.size() * col.set.nodes.size());
    const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), floor});
    out.residual = std::abs(out.lhs - out.rhs) / scale;
    if (out.lhs == 0.0 && out.rhs == 0.0) out.residual = 0.0;
    return out;
}

Forcing random_smooth_forcing(const Grid& grid, int modes, std::uint64_t seed)
{
    struct Term {
        SpaceField shape;
        double omega;
        double phase;
    };
    auto terms = std::make_shared<std::vector<Term>>();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double span = std::max(grid.t1() - grid.t0(), grid.dt());
    for (int q = 0; q < 3; ++q) {
        const double omega = 2.0 * std::numbers::pi * (1.0 + 3.0 * uni(rng)) / span;
        const double phase = 2.0 * std::numbers::pi * uni(rng);
        terms->push_back({random_smooth_field(grid, modes, rng()), omega, phase});
    }
    return [terms, &grid](int level, SpaceField& out) {
        const double t = grid.time(level);
        for (const auto& term : *terms)
            kernels::axpy(std::cos(term.omega * t + term.phase), term.shape.span(), out.span());
        return true;
    };
}

ChapmanKolmogorov chapman_kolmogorov_check(const Evolver& evolver, const FundSolColumn& col, double tau, double t)
{
    const Grid& grid = evolver.grid();
    const int lt = grid.level_of(t);
    const int ltau = grid.level_of(tau);
    if (ltau < col.set.levels.back() || lt < ltau)
        throw LabError(ErrorKind::TimeRangeError, "Chapman-Kolmogorov check needs s <= tau <= t");
    const SpaceField* start = col.field.find(ltau);
    const SpaceField* target = col.field.find(lt);
    if (start == nullptr || target == nullptr) throw LabError(ErrorKind::TimeRangeError, "tau or t not stored in the column");
    RunControl last_only;
    last_only.store = false;
    SpaceField end = *start;
    last_only.observer = [&](int level, const SpaceField& u) {
        if (level == lt) end = u;
    };
    evolver.run_levels(*start, ltau, lt, Forcing{}, last_only);
    SpaceField diff = end;
    kernels::axpy(-1.0, target->span(), diff.span());
    ChapmanKolmogorov out;
    out.norm = std::sqrt(l2_sq(grid, *target));
    const double d = std::sqrt(l2_sq(grid, diff));
    out.residual = out.norm > 0.0 ? d / out.norm : d;
    return out;
}


OracleComparison compare_with_oracle(const Grid& grid, const FundSolColumn& col, const OracleKernel& oracle,
                                     double tau_min, double tau_max)
{
    const auto source = col.set.indices();
    const double s = col.source.Y.t;
    const int k = col.source.k;
    const double tol = 1e-9 * grid.dt();
    double err_avg = 0.0, max_avg = 0.0, err_pt = 0.0, max_pt = 0.0;
    OracleComparison out;
    for (std::size_t q = 0; q < col.field.count(); ++q) {
        const int level = col.field.level_at(q);
        const double t = grid.time(level);
        if (t - s < tau_min - tol || t - s > tau_max + tol) continue;
        ++out.levels;
        const SpaceField& v = col.field.slice(q);
        const auto nodes = static_cast<std::ptrdiff_t>(grid.nodes());
#pragma omp parallel for reduction(max : err_avg, max_avg, err_pt, max_pt) schedule(static)
        for (std::ptrdiff_t pi = 0; pi < nodes; ++pi) {
            const auto p = static_cast<std::size_t>(pi);
            const auto x = grid.position(p);
            const double ga = oracle_averaged(oracle, grid, t, x, source, k);
            const double gp = oracle_scalar(oracle, grid, t, x, s, col.source.Y.x, k);
            err_avg = std::max(err_avg, std::abs(v(p, k) - ga));
            max_avg = std::max(max_avg, std::abs(ga));
            err_pt = std::max(err_pt, std::abs(v(p, k) - gp));
            max_pt = std::max(max_pt, std::abs(gp));
        }
    }
    if (out.levels == 0) throw LabError(ErrorKind::EmptyWindow, "no stored level inside the comparison window");
    out.averaged_rel_linf = err_avg / max_avg;
    out.point_rel_linf = err_pt / max_pt;
    return out;
}

} // namespace parabolic
