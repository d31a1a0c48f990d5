#include <doctest.h>

#include <cmath>

#include "parabolic/errors.hpp"
#include "parabolic/gaussfit.hpp"
#include "support.hpp"

using namespace parabolic;
using namespace testsupport;

TEST_CASE("synthetic Gaussian data is recovered")
{
    Gen gen(5);
    for (int dim : {1, 2}) {
        const double C = gen.uniform(0.5, 3.0), kappa = gen.uniform(0.05, 0.5);
        std::vector<FitPoint> pts;
        for (int i = 0; i < 200; ++i) {
            const double tau = gen.uniform(0.05, 1.0), d = gen.uniform(0.0, 2.0);
            pts.push_back({tau, d, C * std::pow(tau, -0.5 * dim) * std::exp(-kappa * d * d / tau)});
        }
        const auto fit = gaussian_fit(dim, pts);
        CHECK(fit.kappa_fit == doctest::Approx(kappa).epsilon(1e-10));
        CHECK(fit.C_fit == doctest::Approx(C).epsilon(1e-10));
        CHECK(fit.C_sup == doctest::Approx(C).epsilon(1e-10));
        CHECK(fit.rms_residual <= 1e-10);
        CHECK(fit.points == pts.size());
    }
}

TEST_CASE("heat kernel with diffusivity two fits kappa one eighth")
{
    std::vector<FitPoint> pts;
    for (double tau : {0.1, 0.3, 0.7})
        for (double d = 0.0; d < 2.0; d += 0.1) pts.push_back({tau, d, std::exp(-d * d / (8 * tau)) / std::sqrt(8 * M_PI * tau)});
    const auto fit = gaussian_fit(1, pts);
    CHECK(fit.kappa_fit == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(fit.C_fit == doctest::Approx(1 / std::sqrt(8 * M_PI)).epsilon(1e-10));
}

TEST_CASE("verdict compares against the constant from the bounds")
{
    std::vector<FitPoint> flat;
    for (int i = 0; i < 20; ++i) flat.push_back({1.0, 0.1 * i, 1.0});
    const auto fit = gaussian_fit(1, flat);
    CHECK(fit.kappa_fit == doctest::Approx(0.0).epsilon(1e-12));
    const auto v = bound_verdict(fit, bound_constants(1, 1, 0));
    CHECK_FALSE(v.pass);
    CHECK(v.verdict == "FAIL");

    GaussianFit good;
    good.kappa_fit = 0.25;
    good.C_sup = 1.0;
    const auto ok = bound_verdict(good, bound_constants(1, 1, 0));
    CHECK(ok.pass);
    CHECK(ok.kappa_margin == doctest::Approx(16.0));
}

TEST_CASE("fit errors")
{
    auto kind_of = [](const std::vector<FitPoint>& pts) {
        try {
            gaussian_fit(1, pts);
        } catch (const LabError& e) {
            return e.kind();
        }
        return ErrorKind::ConfigError;
    };
    CHECK(kind_of({}) == ErrorKind::EmptyWindow);
    CHECK(kind_of({{1.0, 0.5, 1.0}, {1.0, 0.5, 2.0}}) == ErrorKind::DegenerateFit);
}

TEST_CASE("window points respect the caps")
{
    const double L = 8.0, h = L / 256, dt = h * h / 2;
    auto pr = problem(grid_spec(1, 1, L, 256, dt, 0.0, 64 * dt + 0.3), heat());
    const Grid& g = pr->grid;
    const auto col = averaged_fundsol(*pr->evolver, {{g.time(64), {4.0, 0.0}}, 0, 4 * h}, g.time(g.levels() - 1));
    FitWindow w;
    w.tau_min = 0.0;
    w.tau_max = 0.3;
    const auto pts = collect_fit_points(g, col, w);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
        CHECK(p.tau >= 4 * col.source.eps * col.source.eps - 1e-12);
        CHECK(p.dist <= L / 4);
        CHECK(p.dist * p.dist / p.tau <= 16.0);
        CHECK(p.value > 1e-12);
    }
    const auto fit = gaussian_fit(g, {&col}, w);
    CHECK(fit.kappa_fit == doctest::Approx(0.25).epsilon(0.05));
}
