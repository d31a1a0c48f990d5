#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "parabolic/coefficients.hpp"
#include "parabolic/errors.hpp"
#include "parabolic/presets.hpp"
#include "support.hpp"

using namespace parabolic;
using testsupport::Gen;

namespace {

std::vector<double> constant_a(const Grid& g, double a11, double a12, double a21, double a22)
{
    const CoefficientLayout lay{g.dim(), g.components()};
    std::vector<double> a(g.nodes() * lay.a_block(), 0.0);
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        a[lay.a_index(p, 0, 0, 0, 0)] = a11;
        a[lay.a_index(p, 0, 1, 0, 0)] = a12;
        a[lay.a_index(p, 1, 0, 0, 0)] = a21;
        a[lay.a_index(p, 1, 1, 0, 0)] = a22;
    }
    return a;
}

} // namespace

TEST_CASE("parabolicity of identity and skew coefficients")
{
    const Grid g = Grid::make(2, 1, 1.0, 16, 1e-3, 0.0, 1.0);
    auto id = validate_parabolicity(g, constant_a(g, 1, 0, 0, 1));
    CHECK(id.lambda == doctest::Approx(1.0));
    CHECK(id.Lambda == doctest::Approx(std::sqrt(2.0)));
    const double s = 0.5;
    auto sk = validate_parabolicity(g, constant_a(g, 1, s, -s, 1));
    CHECK(sk.lambda == doctest::Approx(1.0));
    CHECK(sk.Lambda == doctest::Approx(std::sqrt(2.0 + 2.0 * s * s)));
}

TEST_CASE("lambda matches brute-force minimisation over sampled unit vectors")
{
    const Grid g = Grid::make(2, 1, 1.0, 8, 1e-3, 0.0, 1.0);
    const CoefficientLayout lay{2, 1};
    Gen gen(21);
    std::vector<double> a(g.nodes() * lay.a_block());
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        // symmetric positive: M = R R^T + 0.2 I
        const double r00 = gen.uniform(-1, 1), r01 = gen.uniform(-1, 1), r10 = gen.uniform(-1, 1),
                     r11 = gen.uniform(-1, 1);
        a[lay.a_index(p, 0, 0, 0, 0)] = r00 * r00 + r01 * r01 + 0.2;
        a[lay.a_index(p, 0, 1, 0, 0)] = a[lay.a_index(p, 1, 0, 0, 0)] = r00 * r10 + r01 * r11;
        a[lay.a_index(p, 1, 1, 0, 0)] = r10 * r10 + r11 * r11 + 0.2;
    }
    double brute = std::numeric_limits<double>::infinity();
    const int samples = 200000;
    for (std::size_t p = 0; p < g.nodes(); ++p)
        for (int k = 0; k < samples; ++k) {
            const double th = std::numbers::pi * k / samples;
            const double x = std::cos(th), y = std::sin(th);
            const double q = a[lay.a_index(p, 0, 0, 0, 0)] * x * x + 2.0 * a[lay.a_index(p, 0, 1, 0, 0)] * x * y +
                             a[lay.a_index(p, 1, 1, 0, 0)] * y * y;
            brute = std::min(brute, q);
        }
    CHECK(std::abs(validate_parabolicity(g, a).lambda - brute) <= 1e-6);
}

TEST_CASE("non-parabolic A is reported")
{
    const Grid g = Grid::make(2, 1, 1.0, 8, 1e-3, 0.0, 1.0);
    try {
        validate_parabolicity(g, constant_a(g, 1, 0, 0, -0.5));
        FAIL("expected NotParabolic");
    } catch (const LabError& e) {
        CHECK(e.kind() == ErrorKind::NotParabolic);
    }
}

TEST_CASE("drift from a cellular stream is divergence free")
{
    const Grid g = Grid::make(2, 1, 1.0, 64, 1e-3, 0.0, 1.0);
    std::vector<double> H(g.nodes());
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        const auto x = g.position(p);
        H[p] = std::sin(2 * std::numbers::pi * x[0]) * std::sin(2 * std::numbers::pi * x[1]);
    }
    const auto phi = scalar_stream(g, H);
    const auto b = drift_from_stream(g, phi);
    const CoefficientLayout lay{2, 1};
    const double inv2h = 1.0 / (2.0 * g.h());
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        CHECK(b[lay.b_index(p, 0, 0, 0)] == doctest::Approx((H[g.neighbor(p, 1, 1)] - H[g.neighbor(p, 1, -1)]) * inv2h));
        CHECK(b[lay.b_index(p, 1, 0, 0)] ==
              doctest::Approx(-(H[g.neighbor(p, 0, 1)] - H[g.neighbor(p, 0, -1)]) * inv2h));
    }
    const auto rep = validate_drift(g, b);
    CHECK(rep.divergence_residual <= 1e-12);
    CHECK(rep.symmetry_residual <= 1e-12);
    CHECK(rep.pass);

    const auto zero = drift_from_stream(g, scalar_stream(g, std::vector<double>(g.nodes(), 0.0)));
    CHECK(std::all_of(zero.begin(), zero.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("shear stream drift matches hand-computed centred differences")
{
    const Grid g = Grid::make(2, 1, 1.0, 32, 1e-3, 0.0, 1.0);
    std::vector<double> H(g.nodes());
    for (std::size_t p = 0; p < g.nodes(); ++p) H[p] = std::sin(2 * std::numbers::pi * g.position(p)[1]);
    const auto b = drift_from_stream(g, scalar_stream(g, H));
    const CoefficientLayout lay{2, 1};
    const double h = g.h();
    const double factor = std::sin(2 * std::numbers::pi * h) / (2 * std::numbers::pi * h);
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        const double y = g.position(p)[1];
        CHECK(b[lay.b_index(p, 0, 0, 0)] ==
              doctest::Approx(2 * std::numbers::pi * std::cos(2 * std::numbers::pi * y) * factor).epsilon(1e-12));
        CHECK(std::abs(b[lay.b_index(p, 1, 0, 0)]) < 1e-14);
    }
}

TEST_CASE("drift validation")
{
    const Grid g = Grid::make(1, 1, 1.0, 128, 1e-3, 0.0, 1.0);
    std::vector<double> b(g.nodes(), 0.75);
    CHECK(validate_drift(g, b).divergence_residual == 0.0);
    for (std::size_t p = 0; p < g.nodes(); ++p) b[p] = std::sin(2 * std::numbers::pi * g.position(p)[0]);
    const auto rep = validate_drift(g, b);
    CHECK_FALSE(rep.pass);
    const double h = g.h();
    CHECK(rep.divergence_residual == doctest::Approx(std::sin(2 * std::numbers::pi * h) / h).epsilon(1e-9));
    CHECK(rep.divergence_residual == doctest::Approx(2 * std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("zeroth order validation")
{
    const Grid g1 = Grid::make(1, 1, 1.0, 8, 1e-3, 0.0, 1.0);
    auto z = validate_zeroth(g1, std::vector<double>(8, 0.0));
    CHECK(z.min_eigenvalue == 0.0);
    CHECK(z.pass);
    z = validate_zeroth(g1, std::vector<double>(8, 1.0));
    CHECK(z.min_eigenvalue == doctest::Approx(1.0));

    const Grid g2 = Grid::make(1, 2, 1.0, 8, 1e-3, 0.0, 1.0);
    std::vector<double> c;
    for (int p = 0; p < 8; ++p) c.insert(c.end(), {1.0, 0.0, 0.0, -0.1});
    z = validate_zeroth(g2, c);
    CHECK(z.min_eigenvalue == doctest::Approx(-0.1));
    CHECK_FALSE(z.pass);
}

TEST_CASE("presets validate and report their constants")
{
    const Grid g = Grid::make(2, 1, testsupport::two_pi, 32, 1e-2, 0.0, 1.0);
    for (const auto& name : coefficient_preset_names()) {
        if (name == "tabulated" || name == "constant-drift") continue;
        auto c = make_coefficients(g, {{"preset", name}});
        const auto m = validate_coefficients(g, c);
        CHECK(m.lambda > 0.0);
        CHECK(m.Lambda >= m.lambda);
        CHECK(m.divergence_residual <= 1e-12);
        if (c.drift_source() == DriftSource::stream) CHECK(m.Theta.has_value());
    }
    CHECK_THROWS_AS(make_coefficients(g, {{"preset", "identity"}, {"zeroth", -1.0}}), LabError);
}
