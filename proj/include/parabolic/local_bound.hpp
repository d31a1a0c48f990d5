#pragma once

#include <cstdint>
#include <vector>

#include "parabolic/evolve.hpp"

namespace parabolic {

/// Ratio of the local boundedness inequality on one cylinder Q:
///   ||u||_{L^inf(Q/2)} / ((avg_Q |u|^2)^{1/2} + r^2 ||f||_{L^inf(Q)}).
/// Q/2 shares the centre and kind of Q with half the radius; `f` may be null.
double local_bound_ratio(const Grid& grid, const SpaceTimeField& u, const SpaceTimeField* f,
                         const ParabolicCylinder& q);

struct LocalBoundSamples {
    int solutions = 4;
    /// Sup norm of the random forcing (0 for homogeneous solutions).
    double forcing_amplitude = 0.0;
    /// Number of random Fourier modes per axis in initial data and forcing.
    int modes = 3;
    std::uint64_t seed = 1;
    /// Sample the adjoint (forward cylinders Q_r^+, backward solves driven by forcing).
    bool adjoint = false;
};

struct LocalBoundEstimate {
    double n0 = 0.0;
    int evaluated = 0;
    std::size_t worst_cylinder = 0;
    int worst_solution = 0;
};

/// N0_meas = max ratio over cylinders x random solutions. Cylinders must be
/// backward (forward for adjoint sampling). Throws UnresolvableCylinder.
LocalBoundEstimate estimate_local_boundedness(const Evolver& evolver, const std::vector<ParabolicCylinder>& cylinders,
                                              const LocalBoundSamples& samples);

/// Smooth random field: sum of `modes` Fourier modes per axis with normal
/// coefficients, normalised to unit sup norm.
SpaceField random_smooth_field(const Grid& grid, int modes, std::uint64_t seed);

} // namespace parabolic
