#pragma once

#include <cstddef>

#include "parabolic/coefficients.hpp"
#include "parabolic/lattice.hpp"
#include "parabolic/sparse.hpp"

namespace parabolic {

/**
 * Spatial part of L at one coefficient slice, split into its three pieces.
 *
 *   diffusion: -1/2 sum_{a,b} [D-_a (A^{ab} D+_b u) + D+_a (A^{ab} D-_b u)]
 *   drift:      1/2 sum_a    [B^a D_a u + D_a (B^a u)]      (centred D_a)
 *   zeroth:     C u
 *
 * With B symmetric in (i, j) the drift matrix is exactly antisymmetric, and
 * with A elliptic <diffusion u, u> >= lambda ||D+ u||^2.
 */
struct DiscreteOperator {
    CsrMatrix diffusion;
    CsrMatrix drift;
    CsrMatrix zeroth;
    CsrMatrix total;
};

/// Forward operator. Throws NotValidated for unvalidated coefficients.
DiscreteOperator assemble(const Grid& grid, const CoefficientSet& coeffs, std::size_t slice);

/// The formal adjoint L* assembled from its own formula (*A^{ab} = (A^{ba})^T,
/// drift with the opposite sign, C^T). Used only to cross-check that the
/// transpose of `assemble` is the adjoint.
DiscreteOperator assemble_adjoint(const Grid& grid, const CoefficientSet& coeffs, std::size_t slice);

} // namespace parabolic
