#include "parabolic/suite.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "parabolic/column_io.hpp"
#include "parabolic/davies.hpp"
#include "parabolic/discrete_operator.hpp"
#include "parabolic/energy.hpp"
#include "parabolic/errors.hpp"
#include "parabolic/experiment.hpp"
#include "parabolic/gaussfit.hpp"
#include "parabolic/kernels.hpp"
#include "parabolic/local_bound.hpp"
#include "parabolic/presets.hpp"

namespace parabolic {

namespace fs = std::filesystem;
using nlohmann::json;

SuiteLevel parse_level(const std::string& name)
{
    if (name == "smoke") return SuiteLevel::smoke;
    if (name == "full") return SuiteLevel::full;
    throw LabError(ErrorKind::ConfigError, "level must be smoke or full");
}

std::string to_string(SuiteLevel level) { return level == SuiteLevel::smoke ? "smoke" : "full"; }

const std::vector<int>& criterion_ids()
{
    static const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    return ids;
}

std::string criterion_title(int id)
{
    switch (id) {
    case 1: return "oracle convergence (1-D heat)";
    case 2: return "Gaussian fit sanity";
    case 3: return "bound-constant consistency";
    case 4: return "duality identity";
    case 5: return "drift energy neutrality";
    case 6: return "eps-scaling of the energy norm";
    case 7: return "annulus decay";
    case 8: return "pointwise bound";
    case 9: return "Davies growth";
    case 10: return "structural identities";
    case 11: return "drifted oracle";
    case 12: return "determinism";
    }
    return "unknown";
}

std::string format_line(const CriterionResult& r)
{
    std::ostringstream os;
    os << '[' << (r.pass ? "PASS" : "FAIL") << "] " << r.id << ' ' << r.title << ": " << r.summary;
    return os.str();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

json grid_json(int dim, int comps, double side, int cells, double dt, double t0, double t1)
{
    return {{"dim", dim}, {"components", comps}, {"side", side}, {"cells", cells},
            {"dt", dt},   {"t0", t0},            {"t1", t1}};
}

json config_json(const std::string& name, const json& grid, const json& coeffs, std::uint64_t seed)
{
    return {{"schema_version", kConfigSchemaVersion}, {"name", name}, {"grid", grid}, {"coefficients", coeffs},
            {"seed", seed}};
}

struct Built {
    ExperimentConfig cfg;
    std::unique_ptr<Problem> prob;
};

Built build(const json& j)
{
    Built b;
    b.cfg = parse_config(j);
    b.prob = make_problem(b.cfg);
    return b;
}

/// First level at or after t.
double level_at_or_after(double t0, double dt, double t)
{
    return t0 + std::ceil((t - t0) / dt - 1e-9) * dt;
}

// Shared 1-D heat run of criteria 1-3.
struct HeatRun {
    Built built;
    FundSolColumn col;
    double seconds = 0.0;
    double tau_min = 0.0;
    double tau_max = 0.5;
};

class Context {
public:
    Context(SuiteLevel level, std::uint64_t seed, fs::path out) : level_(level), seed_(seed), out_(std::move(out)) {}

    SuiteLevel level() const { return level_; }
    bool full() const { return level_ == SuiteLevel::full; }
    std::uint64_t seed() const { return seed_; }
    fs::path dir(int id) const
    {
        auto d = out_ / ("c" + std::string(id < 10 ? "0" : "") + std::to_string(id));
        fs::create_directories(d);
        return d;
    }

    const HeatRun& heat() { return heat_ ? *heat_ : *(heat_ = heat_run(OracleKernel::heat(1.0), {{"preset", "identity"}}, "heat")); }
    const HeatRun& drifted()
    {
        return drift_ ? *drift_
                      : *(drift_ = heat_run(OracleKernel::drifted_heat(1.0, {1.0, 0.0}),
                                            {{"preset", "constant-drift"}, {"drift", {1.0}}}, "constant-drift"));
    }

private:
    std::unique_ptr<HeatRun> heat_run(const OracleKernel&, const json& coeffs, const std::string& name)
    {
        const auto t_start = Clock::now();
        const double L = 12.5;
        const int cells = full() ? 512 : 256;
        const double h = L / cells;
        const double dt = 0.5 * h * h;
        // Same physical eps at both levels.
        const double eps = (full() ? 4.0 : 2.0) * h;
        const double s = level_at_or_after(0.0, dt, eps * eps);
        const double T = s + std::ceil(0.5 / dt - 1e-9) * dt;
        auto run = std::make_unique<HeatRun>();
        run->built = build(config_json(name + "-1d", grid_json(1, 1, L, cells, dt, 0.0, T + 0.5 * dt), coeffs, seed_));
        const Grid& grid = run->built.prob->grid;
        const SourceSpec src{{s, {0.5 * L, 0.0}}, 0, eps};
        run->col = averaged_fundsol(*run->built.prob->evolver, src, grid.time(grid.level_floor(T)));
        run->tau_min = std::max(0.05, 4.0 * eps * eps);
        run->seconds = seconds_since(t_start);
        return run;
    }

    SuiteLevel level_;
    std::uint64_t seed_;
    fs::path out_;
    std::unique_ptr<HeatRun> heat_;
    std::unique_ptr<HeatRun> drift_;
};

void write_rows(const fs::path& file, const std::string& header, const std::vector<std::vector<double>>& rows)
{
    std::ofstream out(file, std::ios::binary);
    out << header << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << '\n';
    }
}

// Criterion 1 / 11: averaged oracle comparison on t - s in [0.05, 0.5].
CriterionResult oracle_criterion(int id, Context& ctx, const HeatRun& run, const OracleKernel& oracle)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(id), run.built.cfg.hash);
    const Grid& grid = run.built.prob->grid;
    const auto t_cmp = Clock::now();
    const auto cmp = compare_with_oracle(grid, run.col, oracle, run.tau_min, run.tau_max);
    const double seconds = run.seconds + seconds_since(t_cmp);
    r.table.at_most("oracle_rel_linf", "oracle", cmp.averaged_rel_linf, 0.02, "source-averaged closed-form kernel");
    r.table.info("point_kernel_rel_linf", "oracle", cmp.point_rel_linf);
    r.table.timing("runtime_seconds", seconds, 120.0, "solve and oracle comparison");
    write_rows(ctx.dir(id) / "oracle_error.csv", "tau_min,tau_max,levels,averaged_rel_linf,point_rel_linf",
               {{run.tau_min, run.tau_max, double(cmp.levels), cmp.averaged_rel_linf, cmp.point_rel_linf}});
    r.summary = "rel Linf " + fmt(cmp.averaged_rel_linf) + " (<= 0.02), point-kernel " + fmt(cmp.point_rel_linf) +
                ", " + fmt(seconds) + " s (<= 120)";
    return r;
}

GaussianFit heat_fit(const HeatRun& run)
{
    FitWindow w;
    w.tau_min = run.tau_min;
    w.tau_max = run.tau_max;
    const Grid& grid = run.built.prob->grid;
    w.dist_max = grid.side() / 4.0;
    return gaussian_fit(grid, {&run.col}, w);
}

CriterionResult criterion2(Context& ctx)
{
    const auto& run = ctx.heat();
    CriterionResult r;
    r.table = ReportTable(criterion_title(2), run.built.cfg.hash);
    const auto fit = heat_fit(run);
    const double c_true = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    r.table.check("kappa_fit", "gaussian-bound", fit.kappa_fit >= 0.23 && fit.kappa_fit <= 0.26, fit.kappa_fit, 0.25,
                  "window [0.23, 0.26]");
    r.table.at_most("C_fit_rel_error", "gaussian-bound", std::abs(fit.C_fit / c_true - 1.0), 0.10);
    r.table.info("C_sup", "gaussian-bound", fit.C_sup);
    r.table.info("fit_points", "gaussian-bound", double(fit.points));
    write_rows(ctx.dir(2) / "fit.csv", "kappa_fit,C_fit,C_sup,rms_residual,points",
               {{fit.kappa_fit, fit.C_fit, fit.C_sup, fit.rms_residual, double(fit.points)}});
    r.summary = "kappa_fit " + fmt(fit.kappa_fit) + " in [0.23, 0.26], C_fit " + fmt(fit.C_fit) + " (" +
                fmt(100.0 * (fit.C_fit / c_true - 1.0)) + "% vs 0.2821, |.| <= 10%)";
    return r;
}

CriterionResult criterion3(Context& ctx)
{
    const auto& run = ctx.heat();
    CriterionResult r;
    r.table = ReportTable(criterion_title(3), run.built.cfg.hash);
    const auto pc = bound_constants(1.0, 1.0, 0.0, 1.0);
    r.table.at_most("kappa_bound_minus_1/64", "gaussian-bound", std::abs(pc.kappa - 1.0 / 64.0), 1e-15);
    const auto& m = run.built.prob->coeffs.constants();
    const auto measured = bound_constants(m.lambda, m.Lambda, 0.0, 1.0);
    const auto fit = heat_fit(run);
    const auto v = bound_verdict(fit, measured);
    r.table.check("bound_verdict", "gaussian-bound", v.pass, v.kappa_fit, v.kappa_bound, v.verdict);
    r.table.at_least("kappa_margin", "gaussian-bound", v.kappa_margin, 10.0);
    write_rows(ctx.dir(3) / "verdict.csv", "nu,mu,kappa_bound,kappa_fit,margin,C_sup",
               {{measured.nu, measured.mu, measured.kappa, v.kappa_fit, v.kappa_margin, v.C_sup}});
    r.summary = "kappa_bound " + fmt(measured.kappa) + " (1/64), verdict " + v.verdict + ", margin " +
                fmt(v.kappa_margin) + " (>= 10)";
    return r;
}

// Small grids for the structural checks; eps = 2h, source at the box centre.
struct SmallCase {
    std::string name;
    int dim;
    int comps;
    json coeffs;
};

std::vector<SmallCase> duality_cases()
{
    return {
        {"heat", 1, 1, {{"preset", "identity"}}},
        {"anisotropic", 2, 1, {{"preset", "anisotropic"}, {"diagonal", {1.0, 4.0}}}},
        {"cellular-stream", 2, 1, {{"preset", "cellular-stream"}, {"amplitude", 1.0}, {"modes", 1}}},
        {"system-m2", 1, 2, {{"preset", "identity"}, {"diffusivity", {1.0, 2.0}}}},
    };
}

// Time span eps^2 + t_span with eps = 2h.
Built small_problem(const Context& ctx, const SmallCase& c, int cells, double side, double t_span)
{
    const double h = side / cells;
    const double dt = 0.5 * h * h;
    return build(config_json(c.name, grid_json(c.dim, c.comps, side, cells, dt, 0.0, 4.0 * h * h + t_span), c.coeffs,
                             ctx.seed()));
}

SourceSpec centre_source(const Grid& grid, double eps, int k = 0)
{
    const double s = level_at_or_after(grid.t0(), grid.dt(), grid.t0() + eps * eps + grid.dt());
    return {{s, {0.5 * grid.side(), grid.dim() == 2 ? 0.5 * grid.side() : 0.0}}, k, eps};
}

CriterionResult criterion4(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(4), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    std::ostringstream summary;
    const int samples = 25;
    const auto cases = duality_cases();
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        const int cells = c.dim == 1 ? (ctx.full() ? 128 : 64) : (ctx.full() ? 32 : 16);
        auto b = small_problem(ctx, c, cells, 2.0 * std::numbers::pi, 0.6);
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        const auto src = centre_source(grid, 2.0 * grid.h());
        const auto col = averaged_fundsol(*b.prob->evolver, src, grid.time(grid.levels() - 1));
        double worst = 0.0;
        for (int q = 0; q < samples; ++q) {
            const auto d =
                duality_check(*b.prob->evolver, col, random_smooth_forcing(grid, 3, ctx.seed() * 1009ULL + q));
            worst = std::max(worst, d.residual);
            rows.push_back({double(ci), double(q), d.lhs, d.rhs, d.residual});
        }
        r.table.at_most(c.name + ".duality_residual", "duality", worst, 1e-10, "25 random smooth f");
        summary << c.name << ' ' << fmt(worst) << ", ";
    }
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(4) / "duality.csv", "case,sample,lhs,rhs,residual", rows);
    r.summary = "max residual " + summary.str() + "(<= 1e-10)";
    return r;
}

json cellular(double amplitude) { return {{"preset", "cellular-stream"}, {"amplitude", amplitude}, {"modes", 1}}; }

CriterionResult criterion5(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(5), {});
    std::string hashes;
    const int cells = ctx.full() ? 64 : 32;
    const double L = 2.0 * std::numbers::pi;
    const double h = L / cells;
    const double T = ctx.full() ? 0.5 : 0.25;
    std::vector<double> ratios, mode_ratios;
    std::vector<std::vector<double>> rows;
    SpaceField g, mode;
    double worst_skew = 0.0;
    for (double amp : {0.0, 1.0, 10.0, 100.0}) {
        auto b = build(config_json("cellular-energy", grid_json(2, 1, L, cells, h * h, 0.0, T), cellular(amp), ctx.seed()));
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        if (g.size() == 0) {
            g = random_smooth_field(grid, 3, ctx.seed());
            mode = SpaceField(grid);
            for (std::size_t p = 0; p < grid.nodes(); ++p) {
                const auto x = grid.position(p);
                mode.values()[p] = std::sin(x[0]) * std::sin(x[1]);
            }
        }
        const double T_end = grid.time(grid.levels() - 1);
        const auto e = energy_check(*b.prob->evolver, g, Forcing{}, 0.0, T_end);
        const auto em = energy_check(*b.prob->evolver, mode, Forcing{}, 0.0, T_end);
        ratios.push_back(e.ratio);
        mode_ratios.push_back(em.ratio);
        rows.push_back({amp, e.ratio, e.v2, e.drift_work, e.balance_ratio, e.embedding_ratio, em.ratio});
        r.table.info("ratio(amplitude=" + format_double(amp) + ")", "energy-inequality", e.ratio);
        r.table.at_most("balance_defect(amplitude=" + format_double(amp) + ")", "energy-inequality",
                        std::abs(e.balance_ratio - 1.0), 1e-10, "energy identity with the drift work dropped");
        if (amp == 100.0) {
            const auto& S = b.prob->evolver->operator_for_level(1).drift;
            std::mt19937_64 rng(ctx.seed());
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> u(grid.size()), su(grid.size());
            for (int q = 0; q < 100; ++q) {
                for (double& v : u) v = normal(rng);
                kernels::spmv(S, u, su);
                worst_skew = std::max(worst_skew, std::abs(kernels::dot(su, u)) / kernels::dot(u, u));
            }
        }
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    const double spread = (*hi - *lo) / *lo;
    r.table.at_most("ratio_relative_variation", "energy-inequality", spread, 1e-8,
                    "amplitudes 0, 1, 10, 100 with the same random smooth g");
    const auto [mlo, mhi] = std::minmax_element(mode_ratios.begin(), mode_ratios.end());
    r.table.info("eigenmode_ratio_variation", "energy-inequality", (*mhi - *mlo) / *mlo,
                 "g = sin x sin y, a steady state of the cellular drift");
    r.table.at_most("skew_form_max", "energy-inequality", worst_skew, 1e-12, "100 random fields, amplitude 100");
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(5) / "energy.csv", "amplitude,ratio,v2,drift_work,balance_ratio,embedding_ratio,eigenmode_ratio", rows);
    r.summary = "ratio variation " + fmt(spread) + " (< 1e-8), <Su,u>/|u|^2 " + fmt(worst_skew) + " (<= 1e-12)";
    return r;
}

CriterionResult criterion6(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(6), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    std::ostringstream summary;
    for (int dim : {1, 2}) {
        const int cells = dim == 1 ? (ctx.full() ? 512 : 128) : (ctx.full() ? 256 : 128);
        std::vector<double> mult = ctx.full() ? std::vector<double>{4, 8, 16, 32} : std::vector<double>{4, 8, 16};
        const double L = 16.0;
        const double h = L / cells;
        const json cfg_j = config_json("heat-scaling-" + std::to_string(dim) + "d",
                                       grid_json(dim, 1, L, cells, h * h, 0.0, 1.0), {{"preset", "identity"}}, ctx.seed());
        const auto cfg = parse_config(cfg_j);
        hashes += cfg.hash;
        std::vector<double> eps;
        for (double k : mult) eps.push_back(k * h);
        const SpaceTimePoint Y{0.0, {0.5 * L, dim == 2 ? 0.5 * L : 0.0}};
        const auto res = energy_scaling_probe(problem_factory(cfg), Y, 0, eps, 1.0, 32);
        for (std::size_t i = 0; i < eps.size(); ++i) rows.push_back({double(dim), res.eps[i], res.norms[i]});
        const double target = -0.5 * dim;
        r.table.at_most("slope_error(n=" + std::to_string(dim) + ")", "energy-scaling", std::abs(res.slope - target),
                        0.15, "slope " + format_double(res.slope));
        summary << "n=" << dim << " slope " << fmt(res.slope) << " (target " << target << "), ";
    }
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(6) / "scaling.csv", "dim,eps,norm", rows);
    r.summary = summary.str() + "tolerance 0.15";
    return r;
}

std::vector<DecayRow> decay_rows(const Built& b, const SourceSpec& src, const std::vector<double>& radii, double horizon)
{
    const Grid& grid = b.prob->grid;
    DecayAccumulator acc(grid, src, radii);
    RunControl control;
    control.store = false;
    control.observer = [&](int level, const SpaceField& v) { acc.add(level, v); };
    double rmax = *std::max_element(radii.begin(), radii.end());
    const double T = std::min(grid.time(grid.levels() - 1), src.Y.t + horizon * rmax * rmax);
    averaged_fundsol(*b.prob->evolver, src, grid.time(grid.level_floor(T)), control);
    return acc.rows();
}

CriterionResult criterion7(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(7), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    std::ostringstream summary;
    struct Case {
        std::string name;
        int dim;
        json coeffs;
        int cells;
        double side;
        double dt_over_h2;
        double horizon;
    };
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Case> cases = {
        {"heat", 1, {{"preset", "identity"}}, ctx.full() ? 512 : 256, ctx.full() ? 8.0 : 16.0, 0.5, 4.0},
        {"cellular-stream", 2, cellular(1.0), ctx.full() ? 256 : 128, two_pi, 2.0, 2.0},
    };
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        const double h = c.side / c.cells;
        const double eps = 2.0 * h;
        std::vector<double> radii;
        for (double R = 12.0 * eps; R <= c.side / 4.0 * (1.0 + 1e-12); R *= 2.0) radii.push_back(R);
        const double rmax = radii.back();
        const double dt = c.dt_over_h2 * h * h;
        const double s = level_at_or_after(0.0, dt, eps * eps);
        auto b = build(config_json(c.name + "-decay", grid_json(c.dim, 1, c.side, c.cells, dt, 0.0, s + c.horizon * rmax * rmax + dt),
                                   c.coeffs, ctx.seed()));
        hashes += b.cfg.hash;
        const SourceSpec src{{s, {0.5 * c.side, c.dim == 2 ? 0.5 * c.side : 0.0}}, 0, eps};
        const auto table = decay_rows(b, src, radii, c.horizon);
        double lo = table.front().scaled, hi = lo;
        for (const auto& row : table) {
            rows.push_back({double(ci), row.R, row.norm, row.scaled});
            lo = std::min(lo, row.scaled);
            hi = std::max(hi, row.scaled);
        }
        r.table.at_most(c.name + ".spread", "annulus-decay", hi / lo, 2.0,
                        std::to_string(table.size()) + " dyadic radii from 12 eps");
        summary << c.name << " max/min " << fmt(hi / lo) << " over " << table.size() << " radii, ";
    }
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(7) / "decay.csv", "case,R,norm,scaled", rows);
    r.summary = summary.str() + "(<= 2)";
    return r;
}

CriterionResult criterion8(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(8), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    std::ostringstream summary;
    struct Case {
        std::string name;
        int dim;
        json coeffs;
    };
    const std::vector<Case> cases = {
        {"identity", 1, {{"preset", "identity"}}},
        {"constant-drift", 1, {{"preset", "constant-drift"}, {"drift", {1.0}}}},
        {"anisotropic", 2, {{"preset", "anisotropic"}, {"diagonal", {1.0, 4.0}}}},
        {"skew", 2, {{"preset", "skew"}, {"skew", 0.5}}},
        {"cellular-stream", 2, cellular(1.0)},
        {"shear-stream", 2, {{"preset", "shear-stream"}, {"amplitude", 1.0}, {"modes", 1}}},
    };
    double worst = 0.0;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        const int cells = c.dim == 1 ? (ctx.full() ? 512 : 128) : 128;
        const double side = c.dim == 1 ? 8.0 : 2.0 * std::numbers::pi;
        const double h = side / cells;
        const double eps = 4.0 * h;
        const double d_min = 3.0 * eps;
        const double d_max = std::min(side / 4.0, (c.dim == 1 ? 12.0 : 8.0) * eps);
        const double dt = (ctx.full() || c.dim == 1 ? 1.0 : 2.0) * h * h;
        const double s = level_at_or_after(0.0, dt, eps * eps);
        const int stride = c.dim == 1 ? 1 : ctx.full() ? 4 : 8;
        auto b = build(config_json(c.name + "-pointwise", grid_json(c.dim, 1, side, cells, dt, 0.0, s + d_max * d_max + dt),
                                   c.coeffs, ctx.seed()));
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        const SpaceTimePoint Y{s, {0.5 * side, c.dim == 2 ? 0.5 * side : 0.0}};
        std::vector<double> sups;
        for (double e : {eps, 0.5 * eps}) {
            RunControl control;
            control.store_stride = stride;
            const auto col = averaged_fundsol(*b.prob->evolver, {Y, 0, e}, grid.time(grid.levels() - 1), control);
            std::vector<SpaceTimePoint> pts;
            const int first = col.field.first_level();
            for (auto X : probe_set(grid, Y, d_min, d_max, 8)) {
                const int level = grid.level_floor(X.t + 0.5 * grid.dt());
                const int snapped = first + static_cast<int>(std::lround(double(level - first) / stride)) * stride;
                X.t = grid.time(snapped);
                const double d = parabolic_distance(grid, X, Y);
                if (col.field.find(snapped) != nullptr && d >= d_min && d <= side / 4.0) pts.push_back(X);
            }
            const auto res = pointwise_bound_probe(grid, col, pts);
            sups.push_back(res.sup);
            rows.push_back({double(ci), e, res.sup, double(res.evaluated)});
        }
        const double change = std::abs(sups[0] - sups[1]) / sups[1];
        worst = std::max(worst, change);
        r.table.check(c.name + ".sup_finite", "pointwise-bound", std::isfinite(sups[0]) && std::isfinite(sups[1]),
                      sups[0], 0.0);
        r.table.at_most(c.name + ".eps_change", "pointwise-bound", change, 0.05, "eps vs eps/2");
        summary << c.name << ' ' << fmt(sups[0]) << " (" << fmt(100.0 * change) << "%), ";
    }
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(8) / "pointwise.csv", "case,eps,sup,points", rows);
    r.summary = summary.str() + "change < 5%";
    return r;
}

CriterionResult criterion9(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(9), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    std::ostringstream summary;
    {
        const double L = 12.5;
        const int cells = ctx.full() ? 256 : 128;
        const double dt = 1e-3;
        const double T = ctx.full() ? 0.5 : 0.2;
        auto b = build(config_json("heat-davies", grid_json(1, 1, L, cells, dt, 0.0, T), {{"preset", "identity"}}, ctx.seed()));
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        const auto& m = b.prob->coeffs.constants();
        const auto pc = bound_constants(m.lambda, m.Lambda, m.Theta.value_or(0.0), 1.0);
        const Point y{0.5 * L, 0.0}, x{0.5 * L + 2.0, 0.0};
        const SpaceField f = gaussian_bump(grid, y, 0.5);
        for (double gamma : {0.5, 1.0, 2.0}) {
            const auto tw = build_twist(grid, x, y, gamma);
            const auto run = davies_evolve(*b.prob->evolver, tw, f, 0.0, grid.time(grid.levels() - 1));
            const auto g = twist_growth_report(run, pc, tw.gamma, tw.delta);
            rows.push_back({0.0, gamma, tw.gamma, tw.delta, g.rate, g.budget, g.margin});
            r.table.check("heat.growth(gamma=" + format_double(gamma) + ")", "twist-growth", g.pass && g.margin >= 0.0,
                          g.rate, g.budget, "nu " + format_double(pc.nu) + " mu " + format_double(pc.mu));
            summary << "heat gamma " << gamma << " rate " << fmt(g.rate) << " <= " << fmt(g.budget) << ", ";
        }
    }
    {
        const double L = 2.0 * std::numbers::pi;
        const int cells = ctx.full() ? 64 : 32;
        const double dt = 1e-3;
        const double T = ctx.full() ? 0.5 : 0.2;
        auto b = build(config_json("cellular-davies", grid_json(2, 1, L, cells, dt, 0.0, T), cellular(1.0), ctx.seed()));
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        const auto& m = b.prob->coeffs.constants();
        const auto pc = bound_constants(m.lambda, m.Lambda, m.Theta.value_or(0.0), 1.0);
        const Point y{0.5 * L, 0.5 * L}, x{0.5 * L + 1.2, 0.5 * L};
        const auto tw = build_twist(grid, x, y, 1.0);
        const auto run = davies_evolve(*b.prob->evolver, tw, gaussian_bump(grid, y, 0.5), 0.0, grid.time(grid.levels() - 1));
        const auto g = twist_growth_report(run, pc, tw.gamma, tw.delta);
        rows.push_back({1.0, 1.0, tw.gamma, tw.delta, g.rate, g.budget, g.margin});
        r.table.info("cellular.Theta", "twist-growth", pc.Theta);
        r.table.info("cellular.rate", "twist-growth", g.rate);
        r.table.info("cellular.budget", "twist-growth", g.budget, "C0 = 1");
        r.table.info("cellular.margin", "twist-growth", g.margin, g.pass ? "PASS" : "FAIL");
        summary << "cellular Theta " << fmt(pc.Theta) << " rate " << fmt(g.rate) << " budget " << fmt(g.budget) << " ("
                << (g.pass ? "PASS" : "FAIL") << ", reported)";
    }
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(9) / "davies.csv", "case,gamma,gamma_cert,delta_cert,rate,budget,margin", rows);
    r.summary = summary.str();
    return r;
}

CriterionResult criterion10(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(10), {});
    std::string hashes;
    std::vector<std::vector<double>> rows;
    double worst_ck = 0.0, worst_mass = 0.0, worst_div = 0.0, worst_causal = 0.0;
    auto cases = duality_cases();
    cases.push_back({"constant-drift", 1, 1, {{"preset", "constant-drift"}, {"drift", {1.0}}}});
    cases.push_back({"shear-stream", 2, 1, {{"preset", "shear-stream"}, {"amplitude", 1.0}, {"modes", 1}}});
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        const int cells = c.dim == 1 ? (ctx.full() ? 128 : 64) : (ctx.full() ? 32 : 16);
        auto b = small_problem(ctx, c, cells, 2.0 * std::numbers::pi, 0.6);
        hashes += b.cfg.hash;
        const Grid& grid = b.prob->grid;
        const double eps = 2.0 * grid.h();
        const double s = level_at_or_after(0.0, grid.dt(), eps * eps + 5.0 * grid.dt());
        const int k = grid.components() - 1;
        const SourceSpec src{{s, {0.5 * grid.side(), c.dim == 2 ? 0.5 * grid.side() : 0.0}}, k, eps};

        // Causality: start the forced solve well before the source cylinder.
        const auto set = source_set(grid, src);
        const auto early = b.prob->evolver->solve_forced(source_forcing(grid, src, set), grid.t0(), grid.time(grid.levels() - 1));
        double causal = 0.0;
        for (std::size_t q = 0; q < early.field.count(); ++q)
            if (grid.time(early.field.level_at(q)) <= s - eps * eps + 1e-9 * grid.dt())
                causal = std::max(causal, kernels::max_abs(early.field.slice(q).span()));
        worst_causal = std::max(worst_causal, causal);

        const auto col = averaged_fundsol(*b.prob->evolver, src, grid.time(grid.levels() - 1));
        const int last = col.field.last_level();
        const int mid = set.levels.back() + (last - set.levels.back()) / 2;
        const auto ck = chapman_kolmogorov_check(*b.prob->evolver, col, grid.time(mid), grid.time(last));
        worst_ck = std::max(worst_ck, ck.residual);

        double mass = 0.0;
        for (int l = set.levels.back(); l <= last; ++l)
            for (int i = 0; i < grid.components(); ++i)
                mass = std::max(mass, std::abs(column_mass(grid, col, l, i) - (i == k ? 1.0 : 0.0)));
        worst_mass = std::max(worst_mass, mass);

        const auto& m = b.prob->coeffs.constants();
        if (b.prob->coeffs.drift_source() == DriftSource::stream) worst_div = std::max(worst_div, m.divergence_residual);
        rows.push_back({double(ci), causal, ck.residual, mass, m.divergence_residual});
    }
    r.table.check("causality_max_abs", "structure", worst_causal == 0.0, worst_causal, 0.0, "exact zero");
    r.table.at_most("chapman_kolmogorov", "structure", worst_ck, 1e-10);
    r.table.at_most("mass_conservation", "structure", worst_mass, 1e-10);
    r.table.at_most("stream_divergence_residual", "structure", worst_div, 1e-12);
    r.table.set_config_hash(fnv1a_hex(hashes));
    write_rows(ctx.dir(10) / "structure.csv", "case,causal_max,chapman_kolmogorov,mass_defect,divergence", rows);
    r.summary = "CK " + fmt(worst_ck) + ", mass " + fmt(worst_mass) + ", causality " + fmt(worst_causal) +
                ", divergence " + fmt(worst_div) + " (<= 1e-10, 1e-10, 0, 1e-12)";
    return r;
}

bool same_bytes(const fs::path& a, const fs::path& b)
{
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    return fa.good() == fb.good() && sa == sb;
}

CriterionResult criterion12(Context& ctx)
{
    CriterionResult r;
    r.table = ReportTable(criterion_title(12), {});
    std::vector<int> ids(criterion_ids().begin(), criterion_ids().end() - 1);
    const auto base = ctx.dir(12);
    const auto run_a = run_suite(SuiteLevel::smoke, ctx.seed(), base / "run_a", ids);
    const auto run_b = run_suite(SuiteLevel::smoke, ctx.seed(), base / "run_b", ids);
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(base / "run_a")) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        const auto other = base / "run_b" / fs::relative(e.path(), base / "run_a");
        if (!fs::exists(other) || !same_bytes(e.path(), other)) ++differing;
    }
    for (const auto& e : fs::recursive_directory_iterator(base / "run_b"))
        if (e.path().extension() == ".csv" && !fs::exists(base / "run_a" / fs::relative(e.path(), base / "run_b")))
            ++differing;
    r.table.check("csv_files_identical", "determinism", differing == 0 && files > 0, double(differing), 0.0,
                  std::to_string(files) + " CSV files compared");
    r.table.timing("smoke_seconds_run_a", run_a.seconds, 60.0);
    r.table.timing("smoke_seconds_run_b", run_b.seconds, 60.0);
    r.table.set_config_hash(fnv1a_hex("smoke seed " + std::to_string(ctx.seed())));
    r.summary = std::to_string(files) + " CSVs, " + std::to_string(differing) + " differing; smoke " +
                fmt(run_a.seconds) + " s / " + fmt(run_b.seconds) + " s (< 60)";
    return r;
}

CriterionResult run_one(int id, Context& ctx)
{
    switch (id) {
    case 1: return oracle_criterion(1, ctx, ctx.heat(), OracleKernel::heat(1.0));
    case 2: return criterion2(ctx);
    case 3: return criterion3(ctx);
    case 4: return criterion4(ctx);
    case 5: return criterion5(ctx);
    case 6: return criterion6(ctx);
    case 7: return criterion7(ctx);
    case 8: return criterion8(ctx);
    case 9: return criterion9(ctx);
    case 10: return criterion10(ctx);
    case 11: return oracle_criterion(11, ctx, ctx.drifted(), OracleKernel::drifted_heat(1.0, {1.0, 0.0}));
    case 12: return criterion12(ctx);
    }
    throw LabError(ErrorKind::ConfigError, "unknown criterion " + std::to_string(id));
}

} // namespace

SuiteResult run_suite(SuiteLevel level, std::uint64_t seed, const fs::path& out, std::vector<int> ids)
{
    if (ids.empty()) ids = criterion_ids();
    const auto t0 = Clock::now();
    Context ctx(level, seed, out);
    SuiteResult res;
    ReportTable all("suite-" + to_string(level), {});
    std::string hashes;
    for (int id : ids) {
        const auto t = Clock::now();
        CriterionResult r;
        try {
            r = run_one(id, ctx);
        } catch (const LabError& e) {
            if (e.kind() == ErrorKind::ConfigError) throw;
            r.table = ReportTable(criterion_title(id), {});
            r.table.check("error", "harness", false, 0.0, 0.0, e.what());
            r.summary = std::string("error: ") + e.what();
        }
        r.id = id;
        r.title = criterion_title(id);
        r.seconds = seconds_since(t);
        r.pass = r.table.all_pass();
        hashes += r.table.config_hash();
        for (auto row : r.table.rows()) {
            row.name = "c" + std::to_string(id) + "." + row.name;
            all.add(row);
        }
        res.criteria.push_back(std::move(r));
    }
    all.set_config_hash(fnv1a_hex(hashes));
    res.pass = all.all_pass();
    res.seconds = seconds_since(t0);
    json lines = json::array();
    for (const auto& c : res.criteria) lines.push_back(format_line(c));
    all.write(out, {{"level", to_string(level)}, {"seed", seed}, {"criteria", lines}, {"seconds", res.seconds}});
    return res;
}

} // namespace parabolic
