#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "parabolic/evolve.hpp"
#include "parabolic/oracle.hpp"

namespace parabolic {

struct SourceSpec {
    SpaceTimePoint Y;
    int k = 0; ///< column index, 0-based
    double eps = 0.0;
};

/**
 * Discrete Q_eps^-(Y): levels j with t_j in (s - eps^2, s] times the closed
 * ball B_eps(y). A backward-Euler level j stands for the interval
 * (t_{j-1}, t_j], so the forcing on these levels lives exactly in the time
 * slab of the cylinder and the solution vanishes up to `start_level`.
 */
struct SourceSet {
    int start_level = 0;
    std::vector<int> levels;
    std::vector<std::size_t> nodes;
    /// 1 / (count * h^n * dt): the source integrates to exactly 1.
    double density = 0.0;

    std::vector<SpaceTimeIndex> indices() const;
};

/// Throws SourceOutOfRange unless the cylinder fits into the time range,
/// UnresolvableCylinder unless eps is resolvable, RangeError for a bad k.
SourceSet source_set(const Grid& grid, const SourceSpec& src);

struct FundSolColumn {
    SourceSpec source;
    SourceSet set;
    /// v_eps from start_level on; earlier levels are zero.
    SpaceTimeField field;
    RunStats stats;
};

/// v_eps = solution of L v = density 1_{Q_eps^-(Y)} e_k from zero data at the
/// start level up to t_end.
FundSolColumn averaged_fundsol(const Evolver& evolver, const SourceSpec& src, double t_end,
                               const RunControl& control = {});

/// The forcing of the column (for callers that stream the solve themselves).
Forcing source_forcing(const Grid& grid, const SourceSpec& src, const SourceSet& set);

/// int v_eps^k(t, x) dx at a stored level.
double column_mass(const Grid& grid, const FundSolColumn& col, int level, int component);

struct DualityResult {
    double lhs = 0.0; ///< int v_eps . f over the stored run
    double rhs = 0.0; ///< average of (L*)^{-1} f, component k, over Q_eps^-(Y)
    double residual = 0.0;
};

/// Both sides of the duality identity for a column stored with stride 1.
DualityResult duality_check(const Evolver& evolver, const FundSolColumn& col, const Forcing& f,
                            double floor = 1e-300);

/// Random smooth space-time forcing: a few separable products of random
/// smooth spatial fields and random trigonometric time profiles.
Forcing random_smooth_forcing(const Grid& grid, int modes, std::uint64_t seed);

struct ChapmanKolmogorov {
    double residual = 0.0;
    double norm = 0.0;
};

/// Restarts the plain evolution from v_eps(tau) and compares with v_eps(t),
/// relative L2. Needs s <= tau <= t on stored levels; throws TimeRangeError.
ChapmanKolmogorov chapman_kolmogorov_check(const Evolver& evolver, const FundSolColumn& col, double tau, double t);

struct OracleComparison {
    /// max |v - G_avg| / max |G_avg| against the source-averaged oracle.
    double averaged_rel_linf = 0.0;
    /// Same against the point kernel G(t - s, x - y).
    double point_rel_linf = 0.0;
    int levels = 0;
};

/// Compares component k of the column with the oracle on stored levels with
/// tau_min <= t - s <= tau_max.
OracleComparison compare_with_oracle(const Grid& grid, const FundSolColumn& col, const OracleKernel& oracle,
                                     double tau_min, double tau_max);

} // namespace parabolic
