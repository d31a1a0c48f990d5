#pragma once

#include <span>
#include <vector>

#include "parabolic/coefficients.hpp"
#include "parabolic/lattice.hpp"

namespace parabolic {

/**
 * Dyadic BMO estimate of a scalar field on the spatial torus: the largest
 * mean of |phi - mean_Q phi| over aligned dyadic cubes Q with sides
 * L, L/2, ..., 4h. Throws UnresolvableCube when cells < 8.
 */
double bmo_norm(const Grid& grid, std::span<const double> phi);

/// Plain single-threaded version of bmo_norm, kept as the test reference.
double bmo_norm_serial(const Grid& grid, std::span<const double> phi);

/// (sum_{a,b,i,j} sup_t bmo(Phi^{ab}_{ij}(t))^2)^{1/2}.
double theta_of(const Grid& grid, const std::vector<StreamSlice>& stream);

} // namespace parabolic
