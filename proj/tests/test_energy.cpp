#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "parabolic/energy.hpp"
#include "parabolic/local_bound.hpp"
#include "parabolic/oracle.hpp"
#include "support.hpp"

using namespace parabolic;
using namespace testsupport;

TEST_CASE("energy ratio for a heat Fourier mode against the closed form")
{
    const double T = 0.05;
    auto pr = problem(grid_spec(1, 1, 1.0, 256, 1e-5, 0.0, T), heat());
    const Grid& g = pr->grid;
    SpaceField u0(g);
    for (std::size_t p = 0; p < g.nodes(); ++p) u0(p, 0) = std::sin(2 * std::numbers::pi * g.position(p)[0]);
    const auto e = energy_check(*pr->evolver, u0, Forcing{}, 0.0, T);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    // sup ||u||^2 = 1/2, int ||u_x||^2 = (1 - exp(-8 pi^2 T)) / 4
    const double expect = std::sqrt(0.5 + (1.0 - std::exp(-8.0 * pi2 * T)) / 4.0) / std::sqrt(0.5);
    CHECK(std::isfinite(e.ratio));
    CHECK(e.ratio == doctest::Approx(expect).epsilon(1e-3));
    CHECK_FALSE(e.zero_input);
}

TEST_CASE("zero input gives the sentinel")
{
    auto pr = problem(grid_spec(1, 1, 1.0, 32, 1e-3, 0.0, 0.1), heat());
    const auto e = energy_check(*pr->evolver, SpaceField(pr->grid), Forcing{}, 0.0, 0.1);
    CHECK(e.zero_input);
    CHECK(e.ratio == 0.0);
}

TEST_CASE("energy identity balances with and without drift")
{
    Gen gen(14);
    for (double amp : {0.0, 1.0, 30.0}) {
        auto pr = problem(grid_spec(2, 1, two_pi, 32, 1e-2, 0.0, 0.3), cellular(amp));
        const auto g0 = random_smooth_field(pr->grid, 3, gen.next());
        const auto e = energy_check(*pr->evolver, g0, Forcing{}, 0.0, 0.3);
        CHECK(std::abs(e.balance_ratio - 1.0) <= 1e-10);
        CHECK(std::abs(e.drift_work) <= 1e-12 * std::max(1.0, e.diffusion_work));
    }
}

TEST_CASE("local boundedness ratio against a brute-force scan on the heat kernel")
{
    const int cells = 64;
    const double L = 4.0;
    const double h = L / cells;
    auto pr = problem(grid_spec(1, 1, L, cells, h * h, 0.0, 1.0), heat());
    const Grid& g = pr->grid;
    const auto k = OracleKernel::heat(1.0);
    SpaceTimeField u(0, 1);
    for (int l = 0; l < g.levels(); ++l) {
        SpaceField s(g);
        for (std::size_t p = 0; p < g.nodes(); ++p)
            s(p, 0) = oracle_scalar(k, g, g.time(l), g.position(p), -0.05, {1.0, 0.0});
        u.push_back(s);
    }
    const int lc = 100, ic = 20;
    const ParabolicCylinder q{{g.time(lc), g.position(g.node_at(ic))}, 8 * h, CylinderKind::backward};
    // r = 8h, r^2 = 64 dt; half radius 4h, 16 dt
    double sup_half = 0.0, sum = 0.0;
    long count = 0;
    for (int l = lc - 64; l <= lc; ++l)
        for (int i = 0; i < cells; ++i) {
            int d = std::abs(i - ic);
            d = std::min(d, cells - d);
            if (d > 8) continue;
            const double v = u.find(l)->operator()(g.node_at(i), 0);
            sum += v * v;
            ++count;
            if (d <= 4 && l >= lc - 16) sup_half = std::max(sup_half, std::abs(v));
        }
    const double brute = sup_half / std::sqrt(sum / count);
    CHECK(local_bound_ratio(g, u, nullptr, q) == doctest::Approx(brute).epsilon(1e-10));

    // a decoupled two-component copy with a zero second component has the same ratio
    auto pr2 = problem(grid_spec(1, 2, L, cells, h * h, 0.0, 1.0), {{"preset", "identity"}, {"diffusivity", {1.0, 1.0}}});
    SpaceTimeField u2(0, 1);
    for (std::size_t kk = 0; kk < u.count(); ++kk) {
        SpaceField s(pr2->grid);
        for (std::size_t p = 0; p < g.nodes(); ++p) s(p, 0) = u.slice(kk)(p, 0);
        u2.push_back(s);
    }
    CHECK(local_bound_ratio(pr2->grid, u2, nullptr, q) == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("local boundedness ratio of a constant is one")
{
    auto pr = problem(grid_spec(2, 1, 1.0, 32, 1e-3, 0.0, 0.2), heat());
    const Grid& g = pr->grid;
    SpaceTimeField u(0, 1);
    for (int l = 0; l < g.levels(); ++l) {
        SpaceField s(g);
        s.fill(-2.5);
        u.push_back(s);
    }
    const ParabolicCylinder q{{0.15, {0.5, 0.5}}, 0.2, CylinderKind::backward};
    CHECK(local_bound_ratio(g, u, nullptr, q) == doctest::Approx(1.0));
}

TEST_CASE("local boundedness estimate is finite and at least one")
{
    auto pr = problem(grid_spec(1, 1, two_pi, 64, 1e-2, 0.0, 1.0), heat());
    const Grid& g = pr->grid;
    std::vector<ParabolicCylinder> cyl{{{0.6, {3.0, 0.0}}, 0.5, CylinderKind::backward},
                                       {{0.9, {1.0, 0.0}}, 0.3, CylinderKind::backward}};
    LocalBoundSamples s;
    s.solutions = 3;
    const auto est = estimate_local_boundedness(*pr->evolver, cyl, s);
    CHECK(std::isfinite(est.n0));
    CHECK(est.n0 >= 1.0 - 1e-12);
    CHECK(est.evaluated == 6);
    (void)g;
}
