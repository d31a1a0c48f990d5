#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "parabolic/gaussfit.hpp"
#include "parabolic/linear_solver.hpp"
#include "parabolic/oracle.hpp"

namespace parabolic {

inline constexpr int kConfigSchemaVersion = 1;

struct GridSpec {
    int dim = 1;
    int components = 1;
    double side = 1.0;
    int cells = 64;
    double dt = 0.0;
    double t0 = 0.0;
    double t1 = 1.0;

    Grid build() const { return Grid::make(dim, components, side, cells, dt, t0, t1); }
};

struct PointwiseSpec {
    /// Parabolic distances of the probe set, in multiples of eps.
    double d_min_eps = 3.0;
    double d_max_eps = 12.0;
    int radii = 6;
};

struct ScalingSpec {
    std::vector<double> eps;
    double horizon_factor = 1.0;
    int steps_per_eps_sq = 32;
};

struct DecaySpec {
    std::vector<double> radii;
    /// Run the column up to s + horizon_factor * max(R)^2.
    double horizon_factor = 4.0;
};

struct LocalBoundSpec {
    std::vector<double> radii;
    int centers = 3;
    int solutions = 4;
    double forcing_amplitude = 0.0;
};

struct DaviesSpec {
    std::vector<double> gammas;
    Point x{0.0, 0.0};
    Point y{0.0, 0.0};
    double s = 0.0;
    double t = 0.0;
    /// Width of the Gaussian bump data around y.
    double bump_width = 0.5;
};

struct Tolerances {
    double duality = 1e-10;
    double chapman_kolmogorov = 1e-10;
    double mass = 1e-10;
    double growth = 1e-9;
    double oracle = 0.02;
};

/**
 * One experiment, read from a JSON file with "schema_version": 1.
 *
 * Lengths may be numbers or strings "<k>h" (multiples of the mesh width);
 * the grid time step may be given as "dt" or "dt_over_h2". Source times snap
 * to the nearest level.
 */
struct ExperimentConfig {
    std::string name;
    GridSpec grid;
    nlohmann::json coefficients;
    LinearSolverOptions solver;
    double theta = 1.0;
    std::vector<SourceSpec> sources;
    std::optional<OracleKernel> oracle;
    int store_stride = 1;
    int duality_samples = 25;
    int initial_modes = 3;
    std::optional<PointwiseSpec> pointwise;
    std::optional<ScalingSpec> scaling;
    std::optional<DecaySpec> decay;
    std::optional<LocalBoundSpec> local_bound;
    std::optional<DaviesSpec> davies;
    std::optional<FitWindow> fit;
    double C0 = 1.0;
    Tolerances tolerances;
    std::uint64_t seed = 1;
    std::filesystem::path out_dir = "out";
    /// Hash of the canonical JSON text (FNV-1a, hex).
    std::string hash;
    nlohmann::json raw;
};

/// Parses and checks a configuration; every problem is a ConfigError and is
/// raised before any solve.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Directory of the shipped configuration presets.
std::filesystem::path preset_dir();

std::string fnv1a_hex(const std::string& text);

} // namespace parabolic
