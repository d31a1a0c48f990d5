#pragma once

#include <vector>

#include "parabolic/lattice.hpp"

namespace parabolic {

/**
 * Bounded weight psi for the Davies twist, with certified bounds
 * |D_h psi| <= gamma and |D_h^2 psi| <= delta at every node.
 *
 * On the torus psi is a separable periodic ramp built from the anchors:
 *   psi(z) = (gamma/2) sum_a (|d_a| / |d|) rho_{|d_a|}(sign(d_a) (z_a - y_a)),  d = x - y,
 * where rho_D is the periodic C^{1,1} ramp that rises from 0 to D over [0, D]
 * (|rho'| <= 2, |rho''| <= 4/D), stays flat, and returns to 0 over half the
 * remaining period. Then psi(y) = 0, psi(x) = gamma |x - y| / 2,
 * |grad psi| <= gamma and |Hess psi| <= 2 gamma / |x - y|.
 */
struct TwistFunction {
    std::vector<double> psi; ///< one value per node
    double gamma = 0.0;      ///< certified: max(nominal, measured)
    double delta = 0.0;
    double gamma_nominal = 0.0;
    double delta_nominal = 0.0; ///< 4 gamma / |x - y|
    double gamma_measured = 0.0;
    double delta_measured = 0.0;
    Point x{0.0, 0.0};
    Point y{0.0, 0.0};
    bool anchored = false;

    /// psi at an arbitrary point (the analytic ramp); 0 for unanchored twists.
    double value_at(const Grid& grid, const Point& z) const;
};

/// Periodic ramp rho_D on [0, period), see TwistFunction.
double twist_ramp(double s, double D, double period);

/// Throws AnchorsTooClose (|x - y| < 4h) or WrapViolation (|x - y| > L/4).
TwistFunction build_twist(const Grid& grid, const Point& x, const Point& y, double gamma);

/// Twist from an arbitrary node field; gamma and delta are the measured ones.
TwistFunction twist_from_values(const Grid& grid, std::vector<double> psi);

struct TwistBounds {
    double gradient = 0.0; ///< max over nodes and over forward/centred differences of |D_h psi|
    double hessian = 0.0;  ///< max over nodes of the Frobenius norm of the second-difference matrix
};

TwistBounds measure_twist(const Grid& grid, const std::vector<double>& psi);

} // namespace parabolic
