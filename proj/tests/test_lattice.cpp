#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <utility>

#include "parabolic/errors.hpp"
#include "parabolic/lattice.hpp"
#include "parabolic/norms.hpp"
#include "support.hpp"

using namespace parabolic;

TEST_CASE("parabolic distance")
{
    const Grid big = Grid::make(2, 1, 1024.0, 64, 1.0, 0.0, 10.0);
    CHECK(parabolic_distance(big, {4.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}) == doctest::Approx(2.0));
    CHECK(parabolic_distance(big, {3.0, {5.0, 7.0}}, {3.0, {5.0, 7.0}}) == 0.0);

    const Grid g = Grid::make(1, 1, 4.0, 64, 0.01, 0.0, 2.0);
    CHECK(parabolic_distance(g, {1.21, {0.0, 0.0}}, {1.0, {0.5, 0.0}}) == doctest::Approx(0.5));
    // minimum image
    CHECK(parabolic_distance(g, {0.0, {0.1, 0.0}}, {0.0, {3.9, 0.0}}) == doctest::Approx(0.2));
}

TEST_CASE("grid validation")
{
    CHECK_THROWS_AS(Grid::make(1, 1, 1.0, 48, 0.01, 0.0, 1.0), LabError);
    CHECK_THROWS_AS(Grid::make(3, 1, 1.0, 64, 0.01, 0.0, 1.0), LabError);
    CHECK_THROWS_AS(Grid::make(1, 1, -1.0, 64, 0.01, 0.0, 1.0), LabError);
    const Grid g = Grid::make(1, 1, 1.0, 64, 0.01, 0.0, 1.0);
    CHECK(g.levels() == 101);
    CHECK(g.level_of(0.37) == 37);
    CHECK_THROWS_AS((void)g.level_of(0.375), LabError);
    CHECK(g.level_floor(0.375) == 37);
    CHECK(g.level_floor(7.0) == 100);
}

TEST_CASE("backward cylinder membership matches a brute-force integer scan")
{
    const Grid g = Grid::make(1, 1, 1.0, 64, 1.0 / 1024, 0.0, 0.25);
    const int lc = 200;
    const int ic = 20;
    const ParabolicCylinder q{{g.time(lc), g.position(g.node_at(ic))}, 0.25, CylinderKind::backward};
    auto got = cylinder_indices(q, g);

    // r = 16h, r^2 = 64 dt: membership is |i - ic| <= 16 (periodic) and lc - 64 <= l <= lc.
    std::set<std::pair<int, std::size_t>> expect;
    for (int l = 0; l < g.levels(); ++l)
        for (int i = 0; i < 64; ++i) {
            int d = std::abs(i - ic);
            d = std::min(d, 64 - d);
            if (l >= lc - 64 && l <= lc && d <= 16) expect.insert({l, g.node_at(i)});
        }
    std::set<std::pair<int, std::size_t>> have;
    for (const auto& s : got) have.insert({s.level, s.node});
    CHECK(have.size() == got.size());
    CHECK(have == expect);
}

TEST_CASE("cylinder measure converges to 2 r^2 |B_r|")
{
    const double L = 1.0;
    const double r = 0.25;
    const ParabolicCylinder q{{0.5, {0.5, 0.5}}, r, CylinderKind::two_sided};
    double last_err = 1.0;
    for (int cells : {32, 64, 128}) {
        const double h = L / cells;
        const Grid g = Grid::make(2, 1, L, cells, h * h, 0.0, 1.0);
        const double measure = cylinder_indices(q, g).size() * g.cell_volume() * g.dt();
        const double exact = 2.0 * r * r * std::numbers::pi * r * r;
        const double err = std::abs(measure / exact - 1.0);
        CHECK(err < 0.1);
        CHECK(err < last_err * 1.01);
        last_err = err;
    }
}

TEST_CASE("resolvability threshold")
{
    const Grid g = Grid::make(1, 1, 1.0, 64, 1e-4, 0.0, 1.0);
    const double h = g.h();
    CHECK_THROWS_AS(require_resolvable(g, 1.9 * h), LabError);
    const ParabolicCylinder q{{0.5, {0.5, 0.0}}, 2.01 * h, CylinderKind::backward};
    CHECK_FALSE(cylinder_indices(q, g).empty());
    const ParabolicCylinder tiny{{0.5, {0.5, 0.0}}, 1.5 * h, CylinderKind::backward};
    CHECK_THROWS_AS((void)cylinder_indices(tiny, g), LabError);
}

TEST_CASE("field norms")
{
    const int cells = 128;
    const double L = 2.0;
    const Grid g = Grid::make(1, 1, L, cells, 1e-3, 0.0, 1.0);
    const int K = 50;

    SpaceTimeField zero(0, 1);
    for (int k = 0; k < K; ++k) zero.push_back(SpaceField(g));
    auto n0 = field_norms(g, zero);
    CHECK(n0.l2 == 0.0);
    CHECK(n0.linf == 0.0);
    CHECK(n0.v2 == 0.0);

    SpaceTimeField c(0, 1);
    for (int k = 0; k < K; ++k) {
        SpaceField f(g);
        f.fill(-3.0);
        c.push_back(f);
    }
    auto nc = field_norms(g, c);
    CHECK(nc.linf == doctest::Approx(3.0));
    CHECK(nc.v2 == doctest::Approx(3.0 * std::sqrt(L)));

    // static sin(2 pi x / L): gradient part ~ (2 pi / L) (L/2)^{1/2} (duration)^{1/2}
    SpaceTimeField s(0, 1);
    for (int k = 0; k < K; ++k) {
        SpaceField f(g);
        for (std::size_t p = 0; p < g.nodes(); ++p) f(p, 0) = std::sin(2.0 * std::numbers::pi * g.position(p)[0] / L);
        s.push_back(f);
    }
    const auto parts = v2_parts(g, s);
    const double expect = (2.0 * std::numbers::pi / L) * std::sqrt(L / 2.0) * std::sqrt(K * g.dt());
    CHECK(std::sqrt(parts.grad_sq) == doctest::Approx(expect).epsilon(1e-3));
}
