#pragma once

#include <optional>

#include "parabolic/evolve.hpp"

namespace parabolic {

/**
 * Energy of one forced Cauchy run, u(s) = g, L u = f on (s, T].
 *
 * `ratio` is |||u||| / (||g||_{L2} + ||f||_{L^{(2n+4)/(n+4)}}), the measured
 * constant of the energy inequality. The remaining fields are the terms of
 * the discrete backward-Euler energy identity
 *   ||u(T)||^2 + 2 sum dt <A_h u,u> + 2 sum dt <S u,u> + 2 sum dt <C u,u>
 *     + sum ||u^j - u^{j-1}||^2 = ||g||^2 + 2 sum dt <f,u>,
 * in which the drift work <S u,u> vanishes identically.
 */
struct EnergyReport {
    double v2 = 0.0;
    double g_l2 = 0.0;
    double f_lp = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    /// g = 0 and f = 0: ratio is 0/0 and reported as 0.
    bool zero_input = false;

    double final_l2_sq = 0.0;
    double diffusion_work = 0.0;
    double drift_work = 0.0;
    double zeroth_work = 0.0;
    double numerical_dissipation = 0.0;
    double forcing_work = 0.0;
    /// Relative defect of the identity above (NaN for theta != 1).
    double balance_residual = 0.0;
    /// (||u(T)||^2 + diffusion + zeroth + numerical) / (||g||^2 + forcing); 1 up to roundoff.
    double balance_ratio = 0.0;

    /// ||u||_{L^{2+2/n}} / |||u|||, the measured embedding constant.
    double embedding_ratio = 0.0;
};

EnergyReport energy_check(const Evolver& evolver, const SpaceField& g, const Forcing& f, double s, double t_end);

} // namespace parabolic
