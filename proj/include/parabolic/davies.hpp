#pragma once

#include <string>
#include <vector>

#include "parabolic/evolve.hpp"
#include "parabolic/twist.hpp"

namespace parabolic {

/// 2 nu = 4 Lambda^2 / lambda + C0^2 Theta^2 / lambda + 2 C0 Theta, 2 mu = C0 Theta,
/// kappa = 1 / (32 nu).
struct BoundConstants {
    double nu = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
    double Lambda = 0.0;
    double Theta = 0.0;
    double C0 = 1.0;
};

/// Throws InvalidConstants unless lambda > 0, Lambda >= lambda, Theta >= 0, C0 > 0, all finite.
BoundConstants bound_constants(double lambda, double Lambda, double Theta, double C0 = 1.0);

struct DaviesRun {
    std::vector<double> times;
    /// I(t) = int e^{2 psi} |u|^2 = ||P^psi f||^2; I(s) = ||f||^2.
    std::vector<double> I;
    SpaceField result; ///< P^psi_{s -> t} f
    RunStats stats;
};

/// P^psi_{s->t} f = e^psi u(t) with u the Cauchy solution from e^{-psi} f.
DaviesRun davies_evolve(const Evolver& evolver, const TwistFunction& twist, const SpaceField& f, double s,
                        double t);

struct GrowthReport {
    double rate = 0.0;   ///< max over steps of log(I_{k+1}/I_k) / (2 dt_k)
    double budget = 0.0; ///< nu gamma^2 + mu delta
    double margin = 0.0; ///< budget - rate
    double tolerance = 0.0;
    bool pass = false;
};

GrowthReport twist_growth_report(const DaviesRun& run, const BoundConstants& consts, double gamma, double delta,
                                 double tolerance = 1e-9);

} // namespace parabolic
