#include "parabolic/experiment.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "parabolic/column_io.hpp"
#include "parabolic/davies.hpp"
#include "parabolic/energy.hpp"
#include "parabolic/errors.hpp"
#include "parabolic/gaussfit.hpp"
#include "parabolic/kernels.hpp"
#include "parabolic/local_bound.hpp"
#include "parabolic/presets.hpp"

namespace parabolic {

namespace fs = std::filesystem;

Command parse_command(const std::string& name)
{
    if (name == "validate") return Command::validate;
    if (name == "solve") return Command::solve;
    if (name == "fundsol") return Command::fundsol;
    if (name == "probe") return Command::probe;
    if (name == "davies") return Command::davies;
    if (name == "fit") return Command::fit;
    throw LabError(ErrorKind::ConfigError, "unknown command " + name);
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::validate: return "validate";
    case Command::solve: return "solve";
    case Command::fundsol: return "fundsol";
    case Command::probe: return "probe";
    case Command::davies: return "davies";
    case Command::fit: return "fit";
    }
    return "validate";
}

std::unique_ptr<Problem> make_problem(const ExperimentConfig& cfg, std::optional<double> dt, std::optional<double> t0,
                                      std::optional<double> t1)
{
    GridSpec spec = cfg.grid;
    if (dt) spec.dt = *dt;
    if (t0) spec.t0 = *t0;
    if (t1) spec.t1 = *t1;
    auto prob = std::make_unique<Problem>();
    prob->grid = spec.build();
    prob->coeffs = make_coefficients(prob->grid, cfg.coefficients);
    validate_coefficients(prob->grid, prob->coeffs);
    EvolveOptions opts;
    opts.solver = cfg.solver;
    opts.theta = cfg.theta;
    prob->evolver = std::make_unique<Evolver>(prob->grid, prob->coeffs, opts);
    return prob;
}

ProblemFactory problem_factory(const ExperimentConfig& cfg)
{
    return [cfg](double dt, double t0, double t1) { return make_problem(cfg, dt, t0, t1); };
}

SpaceField gaussian_bump(const Grid& grid, const Point& center, double width)
{
    SpaceField f(grid);
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        const double d = grid.torus_distance(grid.position(p), center);
        const double v = std::exp(-d * d / (2.0 * width * width));
        for (int i = 0; i < grid.components(); ++i) f(p, i) = v;
    }
    const double norm = std::sqrt(l2_sq(grid, f));
    for (double& v : f.values()) v /= norm;
    return f;
}

namespace {

std::string fmt(double v) { return format_double(v); }

bool scalar_without_zeroth(const Problem& prob)
{
    const auto& c = prob.coeffs;
    for (std::size_t k = 0; k < c.slice_count(); ++k)
        for (double v : c.slice(k).c)
            if (v != 0.0) return false;
    return true;
}

BoundConstants constants_for(const ExperimentConfig& cfg, const MeasuredConstants& m)
{
    return bound_constants(m.lambda, m.Lambda, m.Theta.value_or(0.0), cfg.C0);
}

int csv_node_stride(const Grid& grid) { return std::max(1, grid.cells() / 128); }

// Run long enough to cover the largest time offset any consumer needs.
double column_horizon(const ExperimentConfig& cfg, const SourceSpec& src)
{
    const Grid grid = cfg.grid.build();
    double t = grid.time(grid.levels() - 1);
    return std::max(src.Y.t, t);
}

FundSolColumn compute_column(const Problem& prob, const SourceSpec& src, double t_end, int stride)
{
    RunControl control;
    control.store_stride = stride;
    return averaged_fundsol(*prob.evolver, src, t_end, control);
}

} // namespace

ReportTable run_validate(const ExperimentConfig& cfg, const fs::path&)
{
    ReportTable rep(cfg.name, cfg.hash);
    auto prob = make_problem(cfg);
    const auto& m = prob->coeffs.constants();
    rep.at_least("lambda", "coefficients", m.lambda, 0.0);
    rep.info("Lambda", "coefficients", m.Lambda);
    if (m.Theta) rep.info("Theta", "coefficients", *m.Theta);
    const double div_tol = prob->coeffs.drift_source() == DriftSource::stream ? 1e-10 : ValidationOptions{}.drift_tolerance;
    rep.at_most("divergence_residual", "coefficients", m.divergence_residual, div_tol);
    rep.at_most("symmetry_residual", "coefficients", m.symmetry_residual, div_tol);
    rep.at_least("zeroth_min_eigenvalue", "coefficients", m.zeroth_min_eigenvalue, -1e-12);
    const auto pc = constants_for(cfg, m);
    rep.info("nu", "gaussian-bound", pc.nu);
    rep.info("mu", "gaussian-bound", pc.mu);
    rep.info("kappa_bound", "gaussian-bound", pc.kappa, "C0=" + fmt(cfg.C0));
    return rep;
}

ReportTable run_solve(const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep(cfg.name, cfg.hash);
    auto prob = make_problem(cfg);
    const Grid& grid = prob->grid;
    const SpaceField g = random_smooth_field(grid, cfg.initial_modes, cfg.seed);
    const double s = grid.t0();
    const double T = grid.time(grid.levels() - 1);

    std::vector<double> mass0(grid.components(), 0.0);
    for (std::size_t p = 0; p < grid.nodes(); ++p)
        for (int i = 0; i < grid.components(); ++i) mass0[i] += g(p, i) * grid.cell_volume();

    fs::create_directories(out);
    std::ofstream csv(out / "solve_series.csv", std::ios::binary);
    csv << "level,t,l2";
    for (int i = 0; i < grid.components(); ++i) csv << ",mass" << i;
    csv << '\n';
    double mass_drift = 0.0;
    double l2_increase = 0.0;
    double prev_l2 = std::sqrt(l2_sq(grid, g));
    RunControl control;
    control.store = false;
    control.observer = [&](int level, const SpaceField& u) {
        const double l2 = std::sqrt(l2_sq(grid, u));
        csv << level << ',' << fmt(grid.time(level)) << ',' << fmt(l2);
        for (int i = 0; i < grid.components(); ++i) {
            double m = 0.0;
            for (std::size_t p = 0; p < grid.nodes(); ++p) m += u(p, i) * grid.cell_volume();
            csv << ',' << fmt(m);
            mass_drift = std::max(mass_drift, std::abs(m - mass0[i]));
        }
        csv << '\n';
        l2_increase = std::max(l2_increase, (l2 - prev_l2) / std::max(prev_l2, 1e-300));
        prev_l2 = l2;
    };
    auto sol = prob->evolver->solve_cauchy(g, s, T, control);
    rep.at_most("solver_residual", "structure", sol.stats.max_residual, cfg.solver.tolerance);
    if (scalar_without_zeroth(*prob)) rep.at_most("mass_drift", "structure", mass_drift, cfg.tolerances.mass);
    rep.at_most("l2_increase_per_step", "energy-inequality", l2_increase, 1e-12);

    const auto e = energy_check(*prob->evolver, g, Forcing{}, s, T);
    rep.info("energy_ratio", "energy-inequality", e.ratio);
    rep.info("v2_norm", "energy-inequality", e.v2);
    rep.at_most("drift_work_relative", "energy-inequality",
                std::abs(e.drift_work) / std::max(e.g_l2 * e.g_l2, 1e-300), 1e-12);
    if (std::isfinite(e.balance_ratio))
        rep.at_most("energy_balance_defect", "energy-inequality", std::abs(e.balance_ratio - 1.0), 1e-10);
    rep.info("embedding_ratio", "energy-inequality", e.embedding_ratio);
    return rep;
}

ReportTable run_fundsol(const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep(cfg.name, cfg.hash);
    if (cfg.sources.empty()) throw LabError(ErrorKind::ConfigError, "fundsol needs at least one source");
    auto prob = make_problem(cfg);
    const Grid& grid = prob->grid;
    int index = 0;
    for (const auto& src : cfg.sources) {
        const std::string tag = "col" + std::to_string(index++);
        const double T = column_horizon(cfg, src);
        const auto col = compute_column(*prob, src, T, cfg.store_stride);
        rep.at_most(tag + ".solver_residual", "structure", col.stats.max_residual, cfg.solver.tolerance);
        rep.check(tag + ".causal_zero", "structure", kernels::max_abs(col.field.slice(0).span()) == 0.0,
                  kernels::max_abs(col.field.slice(0).span()), 0.0, "v = 0 up to s - eps^2");
        if (scalar_without_zeroth(*prob)) {
            double worst = 0.0;
            for (std::size_t q = 0; q < col.field.count(); ++q) {
                const int level = col.field.level_at(q);
                if (level < col.set.levels.back()) continue;
                for (int i = 0; i < grid.components(); ++i) {
                    const double want = i == src.k ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(column_mass(grid, col, level, i) - want));
                }
            }
            rep.at_most(tag + ".mass", "structure", worst, cfg.tolerances.mass);
        }
        if (grid.components() == 1) {
            double mn = 0.0;
            for (std::size_t q = 0; q < col.field.count(); ++q)
                for (double v : col.field.slice(q).values()) mn = std::min(mn, v);
            rep.info(tag + ".min_value", "structure", mn);
        }
        if (col.field.stride() == 1 && cfg.duality_samples > 0) {
            double worst = 0.0;
            for (int r = 0; r < cfg.duality_samples; ++r) {
                const auto d = duality_check(*prob->evolver, col,
                                             random_smooth_forcing(grid, cfg.initial_modes, cfg.seed * 7919ULL + r));
                worst = std::max(worst, d.residual);
            }
            rep.at_most(tag + ".duality", "duality", worst, cfg.tolerances.duality,
                        std::to_string(cfg.duality_samples) + " random smooth forcings");
        }
        {
            const int last = col.field.last_level();
            const int lo = col.set.levels.back();
            int mid = lo + (last - lo) / 2;
            mid = col.field.first_level() + (mid - col.field.first_level()) / col.field.stride() * col.field.stride();
            if (mid >= lo && last > mid) {
                const auto ck = chapman_kolmogorov_check(*prob->evolver, col, grid.time(mid), grid.time(last));
                rep.at_most(tag + ".chapman_kolmogorov", "structure", ck.residual, cfg.tolerances.chapman_kolmogorov);
            }
        }
        if (cfg.oracle) {
            const double tau_min = cfg.fit ? cfg.fit->tau_min : 4.0 * src.eps * src.eps;
            const double tau_max = cfg.fit ? cfg.fit->tau_max : T - src.Y.t;
            const auto cmp = compare_with_oracle(grid, col, *cfg.oracle, tau_min, tau_max);
            rep.at_most(tag + ".oracle_rel_linf", "oracle", cmp.averaged_rel_linf, cfg.tolerances.oracle,
                        "source-averaged kernel");
            rep.info(tag + ".point_kernel_rel_linf", "oracle", cmp.point_rel_linf);
        }
        write_column(out, "column_" + std::to_string(index - 1), grid, col, {{"preset", cfg.coefficients}},
                     csv_node_stride(grid));
    }
    return rep;
}

ReportTable run_probe(const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep(cfg.name, cfg.hash);
    if (cfg.sources.empty()) throw LabError(ErrorKind::ConfigError, "probe needs a source");
    auto prob = make_problem(cfg);
    const Grid& grid = prob->grid;
    const SourceSpec src = cfg.sources.front();
    fs::create_directories(out);

    if (cfg.pointwise) {
        const auto& pw = *cfg.pointwise;
        const int stride = cfg.store_stride;
        std::ofstream csv(out / "probe_pointwise.csv", std::ios::binary);
        csv << "eps,sup,t,x,y\n";
        std::vector<double> sups;
        for (double e : {src.eps, 0.5 * src.eps}) {
            SourceSpec s2 = src;
            s2.eps = e;
            const double d_max = pw.d_max_eps * src.eps;
            const auto col = compute_column(*prob, s2, std::min(grid.time(grid.levels() - 1), src.Y.t + d_max * d_max),
                                            stride);
            const auto points = probe_set(grid, src.Y, pw.d_min_eps * src.eps, d_max, pw.radii);
            // Snap to stored levels; drop points the snap pulls inside 3 eps or past the run.
            std::vector<SpaceTimePoint> stored;
            const int first = col.field.first_level();
            for (auto X : points) {
                const int level = grid.level_floor(X.t + 0.5 * grid.dt());
                const int snapped = first + static_cast<int>(std::lround(double(level - first) / stride)) * stride;
                X.t = grid.time(snapped);
                const double d = parabolic_distance(grid, X, src.Y);
                if (col.field.find(snapped) != nullptr && d >= 3.0 * src.eps && d <= grid.side() / 4.0)
                    stored.push_back(X);
            }
            const auto res = pointwise_bound_probe(grid, col, stored);
            sups.push_back(res.sup);
            csv << fmt(e) << ',' << fmt(res.sup) << ',' << fmt(res.argmax.t) << ',' << fmt(res.argmax.x[0]) << ','
                << fmt(res.argmax.x[1]) << '\n';
            rep.check("pointwise_sup(eps=" + fmt(e) + ")", "pointwise-bound", std::isfinite(res.sup), res.sup, 0.0,
                      std::to_string(res.evaluated) + " probe points");
        }
        rep.at_most("pointwise_eps_change", "pointwise-bound", std::abs(sups[0] - sups[1]) / sups[1], 0.05);
        const auto col = compute_column(*prob, src, grid.time(grid.levels() - 1), stride);
        const double R = std::min(pw.d_max_eps * src.eps, std::sqrt(grid.time(grid.levels() - 1) - src.Y.t));
        rep.info("l1_forward_cylinder", "pointwise-bound", l1_forward_cylinder(grid, col, R), "R=" + fmt(R));
    }

    if (cfg.scaling) {
        const auto& sc = *cfg.scaling;
        const auto res =
            energy_scaling_probe(problem_factory(cfg), src.Y, src.k, sc.eps, sc.horizon_factor, sc.steps_per_eps_sq);
        std::ofstream csv(out / "probe_scaling.csv", std::ios::binary);
        csv << "eps,norm\n";
        for (std::size_t i = 0; i < res.eps.size(); ++i) csv << fmt(res.eps[i]) << ',' << fmt(res.norms[i]) << '\n';
        const double target = -0.5 * grid.dim();
        rep.at_most("scaling_slope_error", "energy-scaling", std::abs(res.slope - target), 0.15,
                    "slope " + fmt(res.slope) + " target " + fmt(target));
    }

    if (cfg.decay) {
        const auto& d = *cfg.decay;
        double rmax = 0.0;
        for (double R : d.radii) rmax = std::max(rmax, R);
        const double T = std::min(grid.time(grid.levels() - 1), src.Y.t + d.horizon_factor * rmax * rmax);
        DecayAccumulator acc(grid, src, d.radii);
        RunControl control;
        control.store = false;
        control.observer = [&](int level, const SpaceField& v) { acc.add(level, v); };
        averaged_fundsol(*prob->evolver, src, grid.time(grid.level_floor(T)), control);
        const auto rows = acc.rows();
        std::ofstream csv(out / "probe_decay.csv", std::ios::binary);
        csv << "R,norm,scaled\n";
        double lo = rows.front().scaled, hi = lo;
        for (const auto& r : rows) {
            csv << fmt(r.R) << ',' << fmt(r.norm) << ',' << fmt(r.scaled) << '\n';
            lo = std::min(lo, r.scaled);
            hi = std::max(hi, r.scaled);
        }
        rep.at_most("decay_spread", "annulus-decay", hi / lo, 2.0, "max/min of R^{n/2} norm outside Q_R");
    }

    if (cfg.local_bound) {
        const auto& lb = *cfg.local_bound;
        std::mt19937_64 rng(cfg.seed);
        std::vector<ParabolicCylinder> cyl;
        const double T = grid.time(grid.levels() - 1);
        for (double r : lb.radii)
            for (int c = 0; c < lb.centers; ++c) {
                const double tmin = grid.t0() + r * r;
                const int lmin = grid.level_floor(tmin) + 1;
                if (lmin >= grid.levels()) throw LabError(ErrorKind::ConfigError, "local_bound radius too large");
                const int level = lmin + static_cast<int>(rng() % static_cast<std::uint64_t>(grid.levels() - lmin));
                const std::size_t p = rng() % grid.nodes();
                cyl.push_back({{std::min(grid.time(level), T), grid.position(p)}, r, CylinderKind::backward});
            }
        LocalBoundSamples samples;
        samples.solutions = lb.solutions;
        samples.forcing_amplitude = lb.forcing_amplitude;
        samples.seed = cfg.seed;
        const auto est = estimate_local_boundedness(*prob->evolver, cyl, samples);
        rep.info("N0_meas", "local-boundedness", est.n0,
                 std::to_string(est.evaluated) + " cylinder/solution pairs, seed " + std::to_string(cfg.seed));
    }
    return rep;
}

ReportTable run_davies(const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep(cfg.name, cfg.hash);
    if (!cfg.davies) throw LabError(ErrorKind::ConfigError, "davies needs a \"davies\" section");
    const auto& ds = *cfg.davies;
    auto prob = make_problem(cfg);
    const Grid& grid = prob->grid;
    const auto& m = prob->coeffs.constants();
    const auto pc = constants_for(cfg, m);
    const SpaceField f = gaussian_bump(grid, ds.y, ds.bump_width);
    fs::create_directories(out);
    std::ofstream csv(out / "davies_series.csv", std::ios::binary);
    csv << "gamma,t,I\n";
    for (double gamma : ds.gammas) {
        const auto tw = build_twist(grid, ds.x, ds.y, gamma);
        const auto run = davies_evolve(*prob->evolver, tw, f, ds.s, ds.t);
        for (std::size_t i = 0; i < run.I.size(); ++i)
            csv << fmt(gamma) << ',' << fmt(run.times[i]) << ',' << fmt(run.I[i]) << '\n';
        const auto g = twist_growth_report(run, pc, tw.gamma, tw.delta, cfg.tolerances.growth);
        std::ostringstream detail;
        detail << "budget " << fmt(g.budget) << " margin " << fmt(g.margin) << " nu " << fmt(pc.nu) << " mu "
               << fmt(pc.mu) << " C0 " << fmt(pc.C0) << " Theta " << fmt(pc.Theta);
        rep.check("growth_rate(gamma=" + fmt(gamma) + ")", "twist-growth", g.pass, g.rate, g.budget, detail.str());
    }
    return rep;
}

ReportTable run_fit(const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep(cfg.name, cfg.hash);
    if (!cfg.fit || cfg.sources.empty()) throw LabError(ErrorKind::ConfigError, "fit needs a source and a fit window");
    auto prob = make_problem(cfg);
    const Grid& grid = prob->grid;
    const auto& src = cfg.sources.front();
    const double T = std::min(grid.time(grid.levels() - 1), src.Y.t + cfg.fit->tau_max);
    const auto col = compute_column(*prob, src, grid.time(grid.level_floor(T + 0.5 * grid.dt())), cfg.store_stride);
    const auto points = collect_fit_points(grid, col, *cfg.fit);
    auto fit = gaussian_fit(grid.dim(), points);
    fit.window = *cfg.fit;
    const auto pc = constants_for(cfg, prob->coeffs.constants());
    const auto v = bound_verdict(fit, pc);

    fs::create_directories(out);
    std::ofstream csv(out / "fit_points.csv", std::ios::binary);
    csv << "tau,dist,value\n";
    for (const auto& p : points) csv << fmt(p.tau) << ',' << fmt(p.dist) << ',' << fmt(p.value) << '\n';

    rep.info("kappa_fit", "gaussian-bound", fit.kappa_fit);
    rep.info("C_fit", "gaussian-bound", fit.C_fit);
    rep.info("C_sup", "gaussian-bound", fit.C_sup);
    rep.info("fit_rms_residual", "gaussian-bound", fit.rms_residual, std::to_string(fit.points) + " points");
    rep.info("nu", "gaussian-bound", pc.nu, "C0=" + fmt(pc.C0));
    rep.info("mu", "gaussian-bound", pc.mu);
    rep.check("bound_verdict", "gaussian-bound", v.pass, v.kappa_fit, v.kappa_bound,
              "kappa_fit/kappa_bound " + fmt(v.kappa_margin));
    return rep;
}

ReportTable run(Command command, const ExperimentConfig& cfg, const fs::path& out)
{
    ReportTable rep;
    switch (command) {
    case Command::validate: rep = run_validate(cfg, out); break;
    case Command::solve: rep = run_solve(cfg, out); break;
    case Command::fundsol: rep = run_fundsol(cfg, out); break;
    case Command::probe: rep = run_probe(cfg, out); break;
    case Command::davies: rep = run_davies(cfg, out); break;
    case Command::fit: rep = run_fit(cfg, out); break;
    }
    rep.write(out, {{"command", to_string(command)}, {"config", cfg.raw}});
    return rep;
}

int exit_status(const ReportTable& report) { return report.all_pass() ? 0 : 1; }

} // namespace parabolic
