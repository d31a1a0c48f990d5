#pragma once

#include <vector>

#include "parabolic/lattice.hpp"

namespace parabolic {

/**
 * Closed-form kernels of constant-coefficient problems on the torus.
 *
 *   heat:             A = a I, B = C = 0
 *   drifted_heat:     A = a I, constant drift b (the heat kernel translated by b (t - s))
 *   decoupled_system: component i is a heat kernel with diffusivity diffusivities[i]
 */
struct OracleKernel {
    enum class Kind { heat, drifted_heat, decoupled_system };
    Kind kind = Kind::heat;
    double a = 1.0;
    Point b{0.0, 0.0};
    std::vector<double> diffusivities;

    static OracleKernel heat(double a) { return {Kind::heat, a, {0.0, 0.0}, {}}; }
    static OracleKernel drifted_heat(double a, Point b) { return {Kind::drifted_heat, a, b, {}}; }
    static OracleKernel decoupled(std::vector<double> a) { return {Kind::decoupled_system, 1.0, {0.0, 0.0}, std::move(a)}; }
};

/// Periodised 1-D heat kernel: sum over images k of G(x + kL) until the
/// image tail drops below 1e-14 of the sum.
double periodic_heat_1d(double a, double tau, double dx, double side);

/// m x m kernel value, row-major. Throws NonCausal when t <= s.
std::vector<double> oracle_eval(const OracleKernel& k, const Grid& grid, double t, const Point& x, double s,
                                const Point& y);

/// Scalar kernel (component (0,0), or (k,k) for decoupled systems).
double oracle_scalar(const OracleKernel& k, const Grid& grid, double t, const Point& x, double s, const Point& y,
                     int component = 0);

/**
 * The exact averaged kernel of the discrete source: the node-count average of
 * the oracle over the source node set, each source level evaluated at its
 * step midpoint t_j - dt/2. This is the object the averaged fundamental
 * solution approximates at fixed epsilon.
 */
double oracle_averaged(const OracleKernel& k, const Grid& grid, double t, const Point& x,
                       const std::vector<SpaceTimeIndex>& source, int component = 0);

} // namespace parabolic
