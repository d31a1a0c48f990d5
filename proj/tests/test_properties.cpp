#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "parabolic/bmo.hpp"
#include "parabolic/discrete_operator.hpp"
#include "parabolic/fundsol.hpp"
#include "parabolic/kernels.hpp"
#include "parabolic/local_bound.hpp"
#include "parabolic/twist.hpp"
#include "support.hpp"

using namespace parabolic;
using namespace testsupport;

namespace {

// Random tabulated 2-D coefficients: A = alpha(x) I with alpha in [0.5, 2],
// drift from a random smooth symmetric stream scaled by `amp`.
json random_tabulated(Gen& gen, int cells, int m, double amp)
{
    const Grid g = Grid::make(2, m, two_pi, cells, 0.01, 0.0, 0.1);
    const CoefficientLayout lay{2, m};
    const Grid scalar = Grid::make(2, 1, two_pi, cells, 0.01, 0.0, 0.1);
    const auto alpha = random_smooth_field(scalar, 2, gen.next());
    std::vector<double> a(g.nodes() * lay.a_block(), 0.0), phi(g.nodes() * lay.a_block(), 0.0);
    std::vector<SpaceField> h;
    for (int q = 0; q < m * m; ++q) h.push_back(random_smooth_field(scalar, 2, gen.next()));
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        const double al = 1.25 + 0.75 * alpha(p, 0);
        for (int ax = 0; ax < 2; ++ax)
            for (int i = 0; i < m; ++i) a[lay.a_index(p, ax, ax, i, i)] = al;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double v = amp * 0.5 * (h[i * m + j](p, 0) + h[j * m + i](p, 0));
                phi[lay.a_index(p, 0, 1, i, j)] = v;
                phi[lay.a_index(p, 1, 0, i, j)] = -v;
            }
    }
    return {{"preset", "tabulated"}, {"a", a}, {"stream", phi}};
}

json random_preset(Gen& gen, int m)
{
    switch (gen.integer(0, 4)) {
    case 0: return heat();
    case 1: return cellular(gen.uniform(0.0, 20.0));
    case 2: return {{"preset", "shear-stream"}, {"amplitude", gen.uniform(0.0, 5.0)}};
    case 3: return {{"preset", "skew"}, {"skew", gen.uniform(-0.9, 0.9)}};
    default: return random_tabulated(gen, 16, m, gen.uniform(0.0, 5.0));
    }
}

double max_abs_diff(const CsrMatrix& a, const CsrMatrix& b)
{
    double d = 0.0;
    for (std::size_t r = 0; r < a.rows; ++r) {
        for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            d = std::max(d, std::abs(a.values[k] - b.at(r, a.col_idx[k])));
        for (std::size_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k)
            d = std::max(d, std::abs(b.values[k] - a.at(r, b.col_idx[k])));
    }
    return d;
}

double max_abs(const CsrMatrix& a)
{
    double d = 0.0;
    for (double v : a.values) d = std::max(d, std::abs(v));
    return d;
}

} // namespace

TEST_CASE("stream drifts are skew for random streams")
{
    Gen gen(101);
    for (int trial = 0; trial < 8; ++trial) {
        const int m = gen.integer(1, 2);
        auto pr = problem(grid_spec(2, m, two_pi, 16, 0.01, 0.0, 0.1), random_tabulated(gen, 16, m, gen.uniform(0.1, 50.0)));
        const auto& op = pr->evolver->operator_for_level(1);
        const double scale = std::max(1.0, max_abs(op.drift));
        CHECK(max_abs_diff(op.drift, transpose(add(op.drift, op.drift, 0.0, -1.0))) <= 1e-12 * scale);
        const auto u = random_smooth_field(pr->grid, 3, gen.next());
        std::vector<double> su(u.size());
        kernels::spmv(op.drift, u.span(), su);
        CHECK(std::abs(kernels::dot(u.span(), su)) <= 1e-12 * scale * kernels::dot(u.span(), u.span()));
    }
}

TEST_CASE("adjoint operator is the transpose for random presets")
{
    Gen gen(202);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = gen.integer(1, 2);
        const auto coeffs = random_preset(gen, m);
        auto pr = problem(grid_spec(2, m, two_pi, 16, 0.01, 0.0, 0.1), coeffs);
        const auto fwd = assemble(pr->grid, pr->coeffs, 0);
        const auto adj = assemble_adjoint(pr->grid, pr->coeffs, 0);
        CHECK(max_abs_diff(adj.total, transpose(fwd.total)) <= 1e-12 * std::max(1.0, max_abs(fwd.total)));
    }
}

TEST_CASE("mass is conserved for random divergence-free problems")
{
    Gen gen(303);
    for (int trial = 0; trial < 6; ++trial) {
        const int m = gen.integer(1, 2);
        auto pr = problem(grid_spec(2, m, two_pi, 16, 0.02, 0.0, 0.4), random_preset(gen, m));
        const Grid& g = pr->grid;
        const auto u0 = random_smooth_field(g, 3, gen.next());
        const auto sol = pr->evolver->solve_cauchy(u0, 0.0, 0.4);
        for (int i = 0; i < m; ++i) {
            double m0 = 0.0, m1 = 0.0, scale = 0.0;
            const auto& last = sol.field.slice(sol.field.count() - 1);
            for (std::size_t p = 0; p < g.nodes(); ++p) {
                m0 += u0(p, i);
                m1 += last(p, i);
                scale += std::abs(u0(p, i));
            }
            CHECK(std::abs(m1 - m0) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("OpenMP kernels agree with the serial reference")
{
    Gen gen(404);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = static_cast<std::size_t>(gen.integer(1, 50000));
        const auto x = gen.vector(n), y0 = gen.vector(n);
        CHECK(kernels::omp::dot(x, y0) == doctest::Approx(kernels::serial::dot(x, y0)).epsilon(1e-12));
        CHECK(kernels::omp::max_abs(x) == kernels::serial::max_abs(x));
        const double alpha = gen.uniform(-2, 2);
        auto ya = y0, yb = y0;
        kernels::omp::axpy(alpha, x, ya);
        kernels::serial::axpy(alpha, x, yb);
        CHECK(ya == yb);
    }
    auto pr = problem(grid_spec(2, 2, two_pi, 32, 0.01, 0.0, 0.1), random_tabulated(gen, 32, 2, 3.0));
    const auto& op = pr->evolver->operator_for_level(1);
    const auto x = gen.vector(pr->grid.size());
    std::vector<double> a(x.size()), b(x.size());
    kernels::omp::spmv(op.total, x, a);
    kernels::serial::spmv(op.total, x, b);
    CHECK(a == b);
}

TEST_CASE("BMO norm under constants, scaling and axis swap")
{
    Gen gen(505);
    const Grid g = Grid::make(2, 1, 1.0, 32, 0.01, 0.0, 0.1);
    for (int trial = 0; trial < 6; ++trial) {
        const auto phi = gen.vector(g.nodes());
        const double base = bmo_norm(g, phi);
        const double c = gen.uniform(-10, 10), lam = gen.uniform(-4, 4);
        auto shifted = phi, scaled = phi, swapped = phi;
        for (double& v : shifted) v += c;
        for (double& v : scaled) v *= lam;
        for (int ix = 0; ix < 32; ++ix)
            for (int iy = 0; iy < 32; ++iy) swapped[g.node_at(ix, iy)] = phi[g.node_at(iy, ix)];
        CHECK(bmo_norm(g, shifted) == doctest::Approx(base).epsilon(1e-9));
        CHECK(bmo_norm(g, scaled) == doctest::Approx(std::abs(lam) * base).epsilon(1e-12));
        CHECK(bmo_norm(g, swapped) == doctest::Approx(base).epsilon(1e-12));
        CHECK(bmo_norm_serial(g, phi) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("parabolic distance is a metric")
{
    Gen gen(606);
    const Grid g = Grid::make(2, 1, 3.0, 16, 0.01, 0.0, 1.0);
    auto pt = [&] { return SpaceTimePoint{gen.uniform(-2, 2), {gen.uniform(0, 3), gen.uniform(0, 3)}}; };
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = pt(), b = pt(), c = pt();
        const double ab = parabolic_distance(g, a, b), bc = parabolic_distance(g, b, c), ac = parabolic_distance(g, a, c);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab == doctest::Approx(parabolic_distance(g, b, a)));
        CHECK(parabolic_distance(g, a, a) == 0.0);
    }
}

TEST_CASE("twist anchors for random grids")
{
    Gen gen(707);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = gen.integer(1, 2);
        const int cells = 1 << gen.integer(5, 7);
        const double side = gen.uniform(4.0, 12.0);
        const Grid g = Grid::make(dim, 1, side, cells, 0.01, 0.0, 1.0);
        const Point y{gen.uniform(0, side), dim == 2 ? gen.uniform(0, side) : 0.0};
        const double r = gen.uniform(4.0 * g.h(), side / 4.0);
        const double th = dim == 2 ? gen.uniform(0, two_pi) : 0.0;
        const Point x{y[0] + r * std::cos(th), dim == 2 ? y[1] + r * std::sin(th) : 0.0};
        const double gamma = gen.uniform(0.0, 4.0);
        const auto tw = build_twist(g, x, y, gamma);
        CHECK(std::abs(tw.value_at(g, y)) <= 1e-12);
        CHECK(tw.value_at(g, x) == doctest::Approx(gamma * r / 2).epsilon(1e-10));
        for (double v : tw.psi) {
            CHECK(v >= -1e-12);
            CHECK(v <= gamma * r / 2 + 1e-12);
        }
    }
}

TEST_CASE("duality for random problems and forcings")
{
    Gen gen(808);
    for (int trial = 0; trial < 5; ++trial) {
        const int m = gen.integer(1, 2);
        auto pr = problem(grid_spec(2, m, two_pi, 16, 0.02, 0.0, 1.0), random_preset(gen, m));
        const Grid& g = pr->grid;
        const SourceSpec src{{g.time(gen.integer(40, 45)), {gen.uniform(0, two_pi), gen.uniform(0, two_pi)}},
                             gen.integer(0, m - 1), gen.uniform(0.8, 0.85)};
        const auto col = averaged_fundsol(*pr->evolver, src, 1.0);
        const auto d = duality_check(*pr->evolver, col, random_smooth_forcing(g, 2, gen.next()));
        CHECK(d.residual <= 1e-10);
    }
}
