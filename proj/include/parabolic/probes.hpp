#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "parabolic/fundsol.hpp"
#include "parabolic/norms.hpp"

namespace parabolic {

/// Grid, validated coefficients and an evolver bound to them. Held by
/// pointer because the evolver refers to the other two members.
struct Problem {
    Grid grid;
    CoefficientSet coeffs;
    std::unique_ptr<Evolver> evolver;
};

/// Builds a validated problem whose time step is `dt` and time range [t0, t1].
using ProblemFactory = std::function<std::unique_ptr<Problem>(double dt, double t0, double t1)>;

struct PointwiseProbe {
    double sup = 0.0;
    SpaceTimePoint argmax;
    int evaluated = 0;
};

/// max |v_eps(X)| |X - Y|_p^n over the probe points. Points at or before
/// s - eps^2 contribute 0. Each point snaps to its nearest node on a stored
/// level. Throws ProbeOutOfRange when eps > |X - Y|_p / 3, |X - Y|_p > L/4,
/// or the level is not stored.
PointwiseProbe pointwise_bound_probe(const Grid& grid, const FundSolColumn& col,
                                     const std::vector<SpaceTimePoint>& points);

/**
 * Probe points around Y with parabolic distance in [d_min, d_max]: for each
 * of `radii` geometric distances d, the points on the boundary of Q_d^+(Y)
 * reached along the time axis (x = y, t = s + d^2) and along each spatial
 * axis at times s + (d/2)^2, s + d^2. All points are snapped to nodes.
 */
std::vector<SpaceTimePoint> probe_set(const Grid& grid, const SpaceTimePoint& Y, double d_min, double d_max,
                                      int radii);

struct ScalingProbe {
    std::vector<double> eps;
    std::vector<double> norms; ///< |||v_eps|||
    double slope = 0.0;
};

/**
 * |||v_eps||| over (s - eps^2, s + horizon_factor eps^2] for each eps, and the
 * least-squares slope of log |||v_eps||| against log eps. Each run uses its
 * own problem with dt = eps^2 / steps_per_eps_sq, so the time discretisation
 * is the same relative to eps in every run. Throws RangeError for fewer
 * than 3 values.
 */
ScalingProbe energy_scaling_probe(const ProblemFactory& make, const SpaceTimePoint& Y, int k,
                                  const std::vector<double>& eps, double horizon_factor = 1.0,
                                  int steps_per_eps_sq = 32);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct DecayRow {
    double R = 0.0;
    double norm = 0.0;   ///< V2-type norm of v_eps outside Q_R(Y)
    double scaled = 0.0; ///< R^{n/2} norm
};

/// Streaming accumulator of the rows of decay_probe: feed it the levels of a
/// column in increasing order.
class DecayAccumulator {
public:
    /// Throws RangeError unless every R satisfies 12 eps <= R <= L/4.
    DecayAccumulator(const Grid& grid, const SourceSpec& src, std::vector<double> radii, int stride = 1);

    void add(int level, const SpaceField& v);
    std::vector<DecayRow> rows() const;

private:
    const Grid* grid_;
    SourceSpec src_;
    std::vector<double> radii_;
    int stride_;
    std::vector<double> grad_sq_;
    std::vector<double> sup_sq_;
};

std::vector<DecayRow> decay_probe(const Grid& grid, const FundSolColumn& col, const std::vector<double>& radii);

/// ||v_eps||_{L1(Q_R^+(Y))}: direct node sum, reported as a diagnostic.
double l1_forward_cylinder(const Grid& grid, const FundSolColumn& col, double R);

} // namespace parabolic
