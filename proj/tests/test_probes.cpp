#include <doctest.h>

#include <cmath>

#include "parabolic/errors.hpp"
#include "parabolic/probes.hpp"
#include "support.hpp"

using namespace parabolic;
using namespace testsupport;

namespace {

struct Setup {
    std::unique_ptr<Problem> pr;
    FundSolColumn col;
};

// 1-D heat column on L = 8, 256 cells, eps = 4h, dt = h^2 / 2, source at level 64.
Setup heat_column(const json& coeffs = heat())
{
    const double L = 8.0, h = L / 256, dt = h * h / 2;
    Setup s;
    s.pr = problem(grid_spec(1, 1, L, 256, dt, 0.0, 64 * dt + 0.5), coeffs);
    const Grid& g = s.pr->grid;
    s.col = averaged_fundsol(*s.pr->evolver, {{g.time(64), {4.0, 0.0}}, 0, 4 * h}, g.time(g.levels() - 1));
    return s;
}

} // namespace

TEST_CASE("pointwise probe matches a direct evaluation on nodes")
{
    auto s = heat_column();
    const Grid& g = s.pr->grid;
    const auto& Y = s.col.source.Y;
    const double h = g.h();
    Gen gen(3);
    std::vector<SpaceTimePoint> pts;
    double expect = 0.0;
    for (int i = 0; i < 40; ++i) {
        const int di = gen.integer(-60, 60);
        const int dl = gen.integer(1, 1000);
        const SpaceTimePoint X{g.time(64 + dl), g.position(g.node_at(128 + di))};
        const double d = std::max(std::sqrt(dl * g.dt()), std::abs(di) * h);
        if (d < 3 * s.col.source.eps) continue;
        pts.push_back(X);
        expect = std::max(expect, std::abs((*s.col.field.find(64 + dl))(g.node_at(128 + di), 0)) * d);
    }
    REQUIRE(pts.size() > 10);
    const auto probe = pointwise_bound_probe(g, s.col, pts);
    CHECK(probe.sup == doctest::Approx(expect).epsilon(1e-12));
    CHECK(probe.evaluated == static_cast<int>(pts.size()));
    (void)Y;
}

TEST_CASE("probe points before the source window contribute zero")
{
    auto s = heat_column();
    const Grid& g = s.pr->grid;
    std::vector<SpaceTimePoint> early{{g.time(0), {4.0, 0.0}}, {g.time(s.col.set.start_level), {1.0, 0.0}}};
    const auto probe = pointwise_bound_probe(g, s.col, early);
    CHECK(probe.sup == 0.0);
    CHECK(probe.evaluated == 2);
}

TEST_CASE("probe points too close to the source are rejected")
{
    auto s = heat_column();
    const Grid& g = s.pr->grid;
    std::vector<SpaceTimePoint> close{{g.time(70), {4.0 + g.h(), 0.0}}};
    try {
        pointwise_bound_probe(g, s.col, close);
        FAIL("expected ProbeOutOfRange");
    } catch (const LabError& e) {
        CHECK(e.kind() == ErrorKind::ProbeOutOfRange);
    }
}

TEST_CASE("probe set stays inside the distance band")
{
    auto s = heat_column();
    const Grid& g = s.pr->grid;
    const double eps = s.col.source.eps;
    const auto pts = probe_set(g, s.col.source.Y, 3 * eps, 12 * eps, 5);
    REQUIRE(!pts.empty());
    for (const auto& X : pts) {
        const double d = parabolic_distance(g, X, s.col.source.Y);
        CHECK(d >= 3 * eps * (1 - 1e-12));
        CHECK(d <= 12 * eps * (1 + 1e-12));
    }
}

TEST_CASE("decay rows of a zero field vanish")
{
    const Grid g = Grid::make(1, 1, 8.0, 256, 1e-3, 0.0, 1.0);
    const double eps = 4 * g.h();
    DecayAccumulator acc(g, {{0.1, {4.0, 0.0}}, 0, eps}, {12 * eps, 15 * eps});
    SpaceField zero(g);
    for (int l = 0; l < 50; ++l) acc.add(l, zero);
    for (const auto& row : acc.rows()) {
        CHECK(row.norm == 0.0);
        CHECK(row.scaled == 0.0);
    }
    CHECK_THROWS_AS(DecayAccumulator(g, {{0.1, {4.0, 0.0}}, 0, eps}, {6 * eps}), LabError);
}

TEST_CASE("decay norm shrinks with the excluded radius")
{
    auto s = heat_column();
    const double eps = s.col.source.eps;
    const auto rows = decay_probe(s.pr->grid, s.col, {12 * eps, 15 * eps});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].norm <= rows[0].norm);
    CHECK(rows[0].norm > 0.0);
}

TEST_CASE("fit_slope is exact on a line")
{
    Gen gen(9);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = gen.uniform(-3, 3), b = gen.uniform(-5, 5);
        std::vector<double> x, y;
        for (int i = 0; i < 7; ++i) {
            x.push_back(gen.uniform(-10, 10));
            y.push_back(a * x.back() + b);
        }
        CHECK(fit_slope(x, y) == doctest::Approx(a).epsilon(1e-12));
    }
    CHECK_THROWS_AS(fit_slope({1.0, 1.0}, {0.0, 2.0}), LabError);
}

TEST_CASE("energy scaling slope does not depend on the diffusivity")
{
    const double L = 16.0, h = L / 256;
    const std::vector<double> eps{4 * h, 8 * h, 16 * h};
    auto slope_for = [&](double a) {
        const auto cfg = parse_config(
            config(grid_spec(1, 1, L, 256, h * h, 0.0, 1.0), {{"preset", "identity"}, {"diffusivity", a}}));
        return energy_scaling_probe(problem_factory(cfg), {0.5, {8.0, 0.0}}, 0, eps).slope;
    };
    const double s1 = slope_for(1.0), s2 = slope_for(2.0);
    CHECK(s1 == doctest::Approx(-0.5).epsilon(0.05));
    CHECK(std::abs(s1 - s2) <= 0.02);
}
