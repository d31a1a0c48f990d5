#include "parabolic/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "parabolic/errors.hpp"
#include "parabolic/presets.hpp"

#ifndef PARABOLIC_PRESET_DIR
#define PARABOLIC_PRESET_DIR "presets"
#endif

namespace parabolic {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw LabError(ErrorKind::ConfigError, what); }

double length(const json& v, double h, const char* what)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (!s.empty() && s.back() == 'h') {
            try {
                std::size_t used = 0;
                const double k = std::stod(s.substr(0, s.size() - 1), &used);
                if (used == s.size() - 1) return k * h;
            } catch (const std::exception&) {
            }
        }
    }
    config_error(std::string(what) + ": expected a number or \"<k>h\"");
}

std::vector<double> lengths(const json& v, double h, const char* what)
{
    if (!v.is_array()) config_error(std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(length(e, h, what));
    return out;
}

Point point(const json& v, int dim, double h, const char* what)
{
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        config_error(std::string(what) + " must have one coordinate per dimension");
    Point p{0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = length(v[a], h, what);
    return p;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* what)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) config_error(std::string("unknown key \"") + it.key() + "\" in " + what);
    }
}

// Lab errors raised while checking a config surface as ConfigError.
template <class F>
void as_config(const char* what, F&& f)
{
    try {
        f();
    } catch (const LabError& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        config_error(std::string(what) + ": " + e.what());
    }
}

GridSpec parse_grid(const json& g)
{
    check_keys(g, {"dim", "components", "side", "cells", "dt", "dt_over_h2", "t0", "t1"}, "grid");
    GridSpec spec;
    spec.dim = g.value("dim", 1);
    spec.components = g.value("components", 1);
    spec.side = g.at("side").get<double>();
    spec.cells = g.at("cells").get<int>();
    spec.t0 = g.value("t0", 0.0);
    spec.t1 = g.at("t1").get<double>();
    const double h = spec.side / spec.cells;
    if (g.contains("dt") == g.contains("dt_over_h2")) config_error("grid needs exactly one of dt, dt_over_h2");
    spec.dt = g.contains("dt") ? g["dt"].get<double>() : g["dt_over_h2"].get<double>() * h * h;
    as_config("grid", [&] { (void)spec.build(); });
    return spec;
}

OracleKernel parse_oracle(const json& o, int dim)
{
    const auto kind = o.at("kind").get<std::string>();
    if (kind == "decoupled-system") return OracleKernel::decoupled(o.at("a").get<std::vector<double>>());
    const double a = o.value("a", 1.0);
    if (kind == "heat") return OracleKernel::heat(a);
    if (kind == "drifted-heat") {
        Point b{0.0, 0.0};
        const auto& bj = o.at("b");
        if (!bj.is_array() || static_cast<int>(bj.size()) != dim) config_error("oracle b needs one entry per axis");
        for (int i = 0; i < dim; ++i) b[i] = bj[i].get<double>();
        return OracleKernel::drifted_heat(a, b);
    }
    config_error("unknown oracle kind \"" + kind + "\"");
}

FitWindow parse_fit(const json& f, double h)
{
    check_keys(f, {"tau_min", "tau_max", "dist_max", "max_similarity", "noise_floor", "node_stride", "level_stride"},
               "fit");
    FitWindow w;
    w.tau_min = f.at("tau_min").get<double>();
    w.tau_max = f.at("tau_max").get<double>();
    if (f.contains("dist_max")) w.dist_max = length(f["dist_max"], h, "fit.dist_max");
    w.max_similarity = f.value("max_similarity", w.max_similarity);
    w.noise_floor = f.value("noise_floor", w.noise_floor);
    w.node_stride = f.value("node_stride", 1);
    w.level_stride = f.value("level_stride", 1);
    if (!(w.tau_max > w.tau_min) || w.tau_min < 0.0) config_error("fit window needs 0 <= tau_min < tau_max");
    if (w.node_stride < 1 || w.level_stride < 1) config_error("fit strides must be >= 1");
    return w;
}

} // namespace

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << hash;
    return os.str();
}

std::filesystem::path preset_dir() { return PARABOLIC_PRESET_DIR; }

ExperimentConfig parse_config(const json& j)
{
    ExperimentConfig cfg;
    try {
        if (!j.is_object()) config_error("configuration must be a JSON object");
        check_keys(j,
                   {"schema_version", "name", "grid", "coefficients", "solver", "sources", "oracle", "store_stride",
                    "duality_samples", "initial_modes", "probes", "davies", "fit", "C0", "tolerances", "seed",
                    "out_dir"},
                   "configuration");
        if (!j.contains("schema_version") || j["schema_version"].get<int>() != kConfigSchemaVersion)
            config_error("schema_version must be " + std::to_string(kConfigSchemaVersion));
        cfg.raw = j;
        cfg.hash = fnv1a_hex(j.dump());
        cfg.name = j.value("name", "experiment");
        cfg.grid = parse_grid(j.at("grid"));
        const Grid grid = cfg.grid.build();
        const double h = grid.h();

        cfg.coefficients = j.at("coefficients");
        as_config("coefficients", [&] {
            auto coeffs = make_coefficients(grid, cfg.coefficients);
            validate_coefficients(grid, coeffs);
        });

        if (j.contains("solver")) {
            const auto& s = j["solver"];
            check_keys(s, {"kind", "tolerance", "theta", "max_iterations"}, "solver");
            const auto kind = s.value("kind", std::string("direct"));
            if (kind == "direct") cfg.solver.kind = LinearSolverKind::direct;
            else if (kind == "iterative") cfg.solver.kind = LinearSolverKind::iterative;
            else config_error("solver.kind must be direct or iterative");
            cfg.solver.tolerance = s.value("tolerance", cfg.solver.tolerance);
            cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
            cfg.theta = s.value("theta", 1.0);
            if (!(cfg.theta >= 0.5 && cfg.theta <= 1.0)) config_error("solver.theta must lie in [0.5, 1]");
        }

        for (const auto& s : j.value("sources", json::array())) {
            check_keys(s, {"s", "y", "k", "eps"}, "source");
            SourceSpec src;
            const double t = s.at("s").get<double>();
            src.Y.t = grid.time(grid.level_floor(t + 0.5 * grid.dt()));
            src.Y.x = point(s.at("y"), grid.dim(), h, "source.y");
            src.k = s.value("k", 0);
            src.eps = length(s.at("eps"), h, "source.eps");
            as_config("source", [&] { (void)source_set(grid, src); });
            cfg.sources.push_back(src);
        }

        if (j.contains("oracle")) cfg.oracle = parse_oracle(j["oracle"], grid.dim());
        cfg.store_stride = j.value("store_stride", 1);
        if (cfg.store_stride < 1) config_error("store_stride must be >= 1");
        cfg.duality_samples = j.value("duality_samples", 25);
        cfg.initial_modes = j.value("initial_modes", 3);
        cfg.C0 = j.value("C0", 1.0);
        if (!(cfg.C0 > 0.0)) config_error("C0 must be positive");
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.out_dir = j.value("out_dir", std::string("out"));

        if (j.contains("probes")) {
            const auto& p = j["probes"];
            check_keys(p, {"pointwise", "scaling", "decay", "local_bound"}, "probes");
            const double eps0 = cfg.sources.empty() ? 0.0 : cfg.sources.front().eps;
            if (p.contains("pointwise")) {
                PointwiseSpec pw;
                pw.d_min_eps = p["pointwise"].value("d_min_eps", pw.d_min_eps);
                pw.d_max_eps = p["pointwise"].value("d_max_eps", pw.d_max_eps);
                pw.radii = p["pointwise"].value("radii", pw.radii);
                if (pw.d_min_eps < 3.0 || pw.d_max_eps < pw.d_min_eps || pw.radii < 1)
                    config_error("pointwise probes need 3 <= d_min_eps <= d_max_eps");
                if (pw.d_max_eps * eps0 > grid.side() / 4.0) config_error("pointwise probes reach past L/4");
                cfg.pointwise = pw;
            }
            if (p.contains("scaling")) {
                ScalingSpec sc;
                sc.eps = lengths(p["scaling"].at("eps"), h, "scaling.eps");
                sc.horizon_factor = p["scaling"].value("horizon_factor", sc.horizon_factor);
                sc.steps_per_eps_sq = p["scaling"].value("steps_per_eps_sq", sc.steps_per_eps_sq);
                if (sc.eps.size() < 3) config_error("scaling needs at least 3 eps values");
                for (double e : sc.eps)
                    if (e < 2.0 * h) config_error("scaling eps below 2h");
                if (sc.steps_per_eps_sq < 2) config_error("steps_per_eps_sq must be >= 2");
                cfg.scaling = sc;
            }
            if (p.contains("decay")) {
                DecaySpec d;
                d.radii = lengths(p["decay"].at("radii"), h, "decay.radii");
                d.horizon_factor = p["decay"].value("horizon_factor", d.horizon_factor);
                for (double R : d.radii)
                    if (R < 12.0 * eps0 * (1.0 - 1e-12) || R > grid.side() / 4.0 * (1.0 + 1e-12))
                        config_error("decay radii must satisfy 12 eps <= R <= L/4");
                cfg.decay = d;
            }
            if (p.contains("local_bound")) {
                LocalBoundSpec lb;
                lb.radii = lengths(p["local_bound"].at("radii"), h, "local_bound.radii");
                lb.centers = p["local_bound"].value("centers", lb.centers);
                lb.solutions = p["local_bound"].value("solutions", lb.solutions);
                lb.forcing_amplitude = p["local_bound"].value("forcing_amplitude", 0.0);
                for (double r : lb.radii) as_config("local_bound radius", [&] { require_resolvable(grid, r); });
                if (lb.centers < 1 || lb.solutions < 1) config_error("local_bound needs centers, solutions >= 1");
                cfg.local_bound = lb;
            }
        }

        if (j.contains("davies")) {
            const auto& d = j["davies"];
            check_keys(d, {"gammas", "x", "y", "s", "t", "bump_width"}, "davies");
            DaviesSpec ds;
            ds.gammas = d.at("gammas").get<std::vector<double>>();
            ds.x = point(d.at("x"), grid.dim(), h, "davies.x");
            ds.y = point(d.at("y"), grid.dim(), h, "davies.y");
            ds.s = grid.time(grid.level_floor(d.value("s", grid.t0()) + 0.5 * grid.dt()));
            ds.t = grid.time(grid.level_floor(d.at("t").get<double>() + 0.5 * grid.dt()));
            ds.bump_width = length(d.value("bump_width", json(0.5)), h, "davies.bump_width");
            if (!(ds.t > ds.s)) config_error("davies needs s < t");
            for (double g : ds.gammas)
                as_config("davies", [&] { (void)build_twist(grid, ds.x, ds.y, g); });
            cfg.davies = ds;
        }

        if (j.contains("fit")) cfg.fit = parse_fit(j["fit"], h);

        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            check_keys(t, {"duality", "chapman_kolmogorov", "mass", "growth", "oracle"}, "tolerances");
            cfg.tolerances.duality = t.value("duality", cfg.tolerances.duality);
            cfg.tolerances.chapman_kolmogorov = t.value("chapman_kolmogorov", cfg.tolerances.chapman_kolmogorov);
            cfg.tolerances.mass = t.value("mass", cfg.tolerances.mass);
            cfg.tolerances.growth = t.value("growth", cfg.tolerances.growth);
            cfg.tolerances.oracle = t.value("oracle", cfg.tolerances.oracle);
        }
    } catch (const json::exception& e) {
        config_error(e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) config_error("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        config_error(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

} // namespace parabolic
