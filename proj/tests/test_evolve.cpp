#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "parabolic/evolve.hpp"
#include "parabolic/kernels.hpp"
#include "support.hpp"

using namespace parabolic;
using namespace testsupport;

namespace {

SpaceTimeField random_space_time(const Grid& g, Gen& gen)
{
    SpaceTimeField f(0, 1);
    for (int l = 0; l < g.levels(); ++l) {
        SpaceField s(g);
        for (double& v : s.values()) v = gen.uniform(-1, 1);
        f.push_back(std::move(s));
    }
    return f;
}

double mean(const Grid& g, const SpaceField& u, int comp)
{
    double s = 0.0;
    for (std::size_t p = 0; p < g.nodes(); ++p) s += u(p, comp);
    return s / static_cast<double>(g.nodes());
}

} // namespace

TEST_CASE("Fourier mode of the 1-D heat equation decays like exp(-4 pi^2 t)")
{
    auto pr = problem(grid_spec(1, 1, 1.0, 256, 1e-5, 0.0, 0.01), heat());
    const Grid& g = pr->grid;
    SpaceField u0(g);
    for (std::size_t p = 0; p < g.nodes(); ++p) u0(p, 0) = std::sin(2 * std::numbers::pi * g.position(p)[0]);
    RunControl c;
    c.store_stride = g.levels() - 1;
    const auto sol = pr->evolver->solve_cauchy(u0, 0.0, 0.01, c);
    const auto& last = sol.field.slice(sol.field.count() - 1);
    double amp = 0.0;
    for (std::size_t p = 0; p < g.nodes(); ++p) amp += 2.0 * g.h() * last(p, 0) * u0(p, 0);
    CHECK(amp == doctest::Approx(std::exp(-4 * std::numbers::pi * std::numbers::pi * 0.01)).epsilon(1e-3));
    CHECK(amp == doctest::Approx(0.6738).epsilon(1e-3));
}

TEST_CASE("constants are exact solutions when C = 0")
{
    auto pr = problem(grid_spec(2, 1, two_pi, 32, 1e-2, 0.0, 0.5), cellular(5.0));
    SpaceField one(pr->grid);
    one.fill(1.0);
    const auto sol = pr->evolver->solve_cauchy(one, 0.0, 0.5);
    double dev = 0.0;
    for (std::size_t k = 0; k < sol.field.count(); ++k)
        for (double v : sol.field.slice(k).values()) dev = std::max(dev, std::abs(v - 1.0));
    CHECK(dev <= 1e-12);
}

TEST_CASE("mass is conserved per component")
{
    Gen gen(2);
    for (const auto& [grid, coeffs] : std::vector<std::pair<json, json>>{
             {grid_spec(2, 1, two_pi, 32, 1e-2, 0.0, 0.5), cellular(20.0)},
             {grid_spec(1, 2, two_pi, 64, 1e-3, 0.0, 0.2), {{"preset", "identity"}, {"diffusivity", {1.0, 3.0}}}},
             {grid_spec(1, 1, two_pi, 64, 1e-3, 0.0, 0.2), {{"preset", "constant-drift"}, {"drift", {2.0}}}},
         }) {
        auto pr = problem(grid, coeffs);
        const Grid& g = pr->grid;
        SpaceField u0(g);
        for (double& v : u0.values()) v = gen.uniform(0, 1);
        const auto sol = pr->evolver->solve_cauchy(u0, 0.0, g.time(g.levels() - 1));
        for (int i = 0; i < g.components(); ++i) {
            const double m0 = mean(g, u0, i);
            for (std::size_t k = 0; k < sol.field.count(); ++k)
                CHECK(std::abs(mean(g, sol.field.slice(k), i) - m0) <= 1e-10);
        }
    }
}

TEST_CASE("forced solves: zero forcing and constant forcing")
{
    auto pr = problem(grid_spec(1, 2, 1.0, 32, 0.01, 0.0, 1.0), {{"preset", "identity"}, {"diffusivity", {1.0, 2.0}}});
    const Grid& g = pr->grid;
    const auto zero = pr->evolver->solve_forced(Forcing{}, 0.2, 0.8);
    for (std::size_t k = 0; k < zero.field.count(); ++k) CHECK(kernels::max_abs(zero.field.slice(k).span()) == 0.0);

    const double c0 = 1.5, c1 = -2.0;
    Forcing f = [&](int, SpaceField& out) {
        for (std::size_t p = 0; p < g.nodes(); ++p) {
            out(p, 0) = c0;
            out(p, 1) = c1;
        }
        return true;
    };
    const auto sol = pr->evolver->solve_forced(f, 0.2, 0.8);
    for (std::size_t k = 0; k < sol.field.count(); ++k) {
        const double t = g.time(sol.field.level_at(k)) - 0.2;
        CHECK(mean(g, sol.field.slice(k), 0) == doctest::Approx(c0 * t).epsilon(1e-12));
        CHECK(mean(g, sol.field.slice(k), 1) == doctest::Approx(c1 * t).epsilon(1e-12));
    }
}

TEST_CASE("forward and adjoint solves satisfy the transpose identity")
{
    Gen gen(31);
    const std::vector<json> presets = {heat(), cellular(4.0), {{"preset", "skew"}, {"skew", 0.5}}};
    for (int trial = 0; trial < 50; ++trial) {
        const json& c = presets[trial % presets.size()];
        const int dim = c == heat() ? 1 : 2;
        auto pr = problem(grid_spec(dim, 1, two_pi, dim == 1 ? 32 : 8, 0.02, 0.0, 0.2), c);
        const Grid& g = pr->grid;
        const auto f = random_space_time(g, gen);
        const auto h = random_space_time(g, gen);
        const double T = g.time(g.levels() - 1);
        const auto u = pr->evolver->solve_forced(forcing_from(f), 0.0, T);
        const auto U = pr->evolver->solve_adjoint(forcing_from(h), T, 0.0);
        double lhs = 0.0, rhs = 0.0, scale = 0.0;
        for (int l = 1; l < g.levels(); ++l) {
            const double a = kernels::serial::dot(u.field.find(l)->span(), h.find(l)->span());
            const double b = kernels::serial::dot(f.find(l)->span(), U.field.find(l)->span());
            lhs += a;
            rhs += b;
            scale += std::abs(a) + std::abs(b);
        }
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("self-adjoint coefficients: adjoint equals forward under time reflection")
{
    auto pr = problem(grid_spec(2, 1, 1.0, 16, 1e-3, 0.0, 0.05), {{"preset", "anisotropic"}, {"diagonal", {1.0, 4.0}}});
    const Grid& g = pr->grid;
    Gen gen(6);
    SpaceField phi(g);
    for (double& v : phi.values()) v = gen.uniform(-1, 1);
    const int a = 0, b = g.levels() - 1;
    Forcing first = [&](int l, SpaceField& out) {
        if (l != a + 1) return false;
        out = phi;
        return true;
    };
    Forcing last = [&](int l, SpaceField& out) {
        if (l != b) return false;
        out = phi;
        return true;
    };
    const auto u = pr->evolver->solve_forced(first, g.time(a), g.time(b));
    const auto U = pr->evolver->solve_adjoint(last, g.time(b), g.time(a));
    double worst = 0.0, size = 0.0;
    for (int l = a + 1; l <= b; ++l) {
        const auto& x = u.field.find(l)->values();
        const auto& y = U.field.find(a + b + 1 - l)->values();
        for (std::size_t k = 0; k < x.size(); ++k) {
            worst = std::max(worst, std::abs(x[k] - y[k]));
            size = std::max(size, std::abs(x[k]));
        }
    }
    CHECK(worst <= 1e-12 * size);
}

TEST_CASE("iterative solver matches the direct solver")
{
    json cfg = config(grid_spec(2, 1, two_pi, 32, 1e-2, 0.0, 0.2), cellular(2.0));
    auto direct = make_problem(parse_config(cfg));
    cfg["solver"] = {{"kind", "iterative"}, {"tolerance", 1e-10}};
    auto iter = make_problem(parse_config(cfg));
    Gen gen(12);
    SpaceField u0(direct->grid);
    for (double& v : u0.values()) v = gen.uniform(-1, 1);
    const auto a = direct->evolver->solve_cauchy(u0, 0.0, 0.2);
    const auto b = iter->evolver->solve_cauchy(u0, 0.0, 0.2);
    CHECK(b.stats.max_residual <= 1e-10);
    CHECK(b.stats.iterations > 0);
    double d = 0.0;
    for (std::size_t k = 0; k < a.field.count(); ++k)
        for (std::size_t i = 0; i < a.field.slice(k).size(); ++i)
            d = std::max(d, std::abs(a.field.slice(k).values()[i] - b.field.slice(k).values()[i]));
    CHECK(d <= 1e-9);
}

TEST_CASE("non-finite initial data is rejected")
{
    auto pr = problem(grid_spec(1, 1, 1.0, 16, 1e-2, 0.0, 0.1), heat());
    SpaceField u0(pr->grid);
    u0(3, 0) = std::nan("");
    CHECK_THROWS_AS(pr->evolver->solve_cauchy(u0, 0.0, 0.1), LabError);
}
