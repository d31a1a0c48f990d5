#include "parabolic/presets.hpp"

#include <cmath>
#include <numbers>

#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw LabError(ErrorKind::ConfigError, what); }

std::vector<double> diffusivities(const Grid& grid, const json& spec)
{
    const int m = grid.components();
    std::vector<double> d(static_cast<std::size_t>(m), 1.0);
    if (!spec.contains("diffusivity")) return d;
    const auto& v = spec.at("diffusivity");
    if (v.is_number()) {
        std::fill(d.begin(), d.end(), v.get<double>());
    } else if (v.is_array() && v.size() == d.size()) {
        d = v.get<std::vector<double>>();
    } else {
        config_error("diffusivity must be a number or one value per component");
    }
    return d;
}

CoefficientSlice isotropic_slice(const Grid& grid, const json& spec)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    const auto d = diffusivities(grid, spec);
    const double zeroth = spec.value("zeroth", 0.0);
    if (zeroth < 0.0) config_error("zeroth must be nonnegative");
    CoefficientSlice s;
    s.a.assign(grid.nodes() * lay.a_block(), 0.0);
    s.b.assign(grid.nodes() * lay.b_block(), 0.0);
    s.c.assign(grid.nodes() * lay.c_block(), 0.0);
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        for (int i = 0; i < lay.m; ++i) {
            for (int a = 0; a < lay.n; ++a) s.a[lay.a_index(p, a, a, i, i)] = d[static_cast<std::size_t>(i)];
            s.c[lay.c_index(p, i, i)] = zeroth;
        }
    }
    return s;
}

std::vector<double> node_field(const Grid& grid, auto&& fn)
{
    std::vector<double> h(grid.nodes());
    for (std::size_t p = 0; p < grid.nodes(); ++p) h[p] = fn(grid.position(p));
    return h;
}

std::vector<double> array_of(const json& spec, const char* key, std::size_t want)
{
    if (!spec.contains(key)) config_error(std::string("tabulated coefficients need '") + key + "'");
    auto v = spec.at(key).get<std::vector<double>>();
    if (v.size() != want)
        config_error(std::string("tabulated '") + key + "' has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(want));
    return v;
}

} // namespace

const std::vector<std::string>& coefficient_preset_names()
{
    static const std::vector<std::string> names{"identity",     "anisotropic",    "skew",     "cellular-stream",
                                                "shear-stream", "constant-drift", "tabulated"};
    return names;
}

StreamSlice scalar_stream(const Grid& grid, const std::vector<double>& h)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    StreamSlice s;
    s.phi.assign(grid.nodes() * lay.a_block(), 0.0);
    if (grid.dim() < 2) return s;
    for (std::size_t p = 0; p < grid.nodes(); ++p) {
        for (int i = 0; i < lay.m; ++i) {
            s.phi[lay.a_index(p, 0, 1, i, i)] = h[p];
            s.phi[lay.a_index(p, 1, 0, i, i)] = -h[p];
        }
    }
    return s;
}

CoefficientSet make_coefficients(const Grid& grid, const json& spec)
{
    if (!spec.is_object() || !spec.contains("preset")) config_error("coefficient spec needs a 'preset' field");
    const auto name = spec.at("preset").get<std::string>();
    const CoefficientLayout lay{grid.dim(), grid.components()};
    const double two_pi_over_l = 2.0 * std::numbers::pi / grid.side();

    try {
        if (name == "identity") return CoefficientSet(grid, {isotropic_slice(grid, spec)});

        if (name == "anisotropic") {
            auto s = isotropic_slice(grid, spec);
            auto diag = spec.value("diagonal", std::vector<double>{1.0, 4.0});
            if (static_cast<int>(diag.size()) < grid.dim()) config_error("anisotropic needs one diagonal entry per axis");
            for (std::size_t p = 0; p < grid.nodes(); ++p)
                for (int i = 0; i < lay.m; ++i)
                    for (int a = 0; a < lay.n; ++a) s.a[lay.a_index(p, a, a, i, i)] = diag[static_cast<std::size_t>(a)];
            return CoefficientSet(grid, {std::move(s)});
        }

        if (name == "skew") {
            if (grid.dim() != 2) config_error("skew preset needs dim = 2");
            auto s = isotropic_slice(grid, spec);
            const double k = spec.value("skew", 0.5);
            for (std::size_t p = 0; p < grid.nodes(); ++p)
                for (int i = 0; i < lay.m; ++i) {
                    s.a[lay.a_index(p, 0, 1, i, i)] = k;
                    s.a[lay.a_index(p, 1, 0, i, i)] = -k;
                }
            return CoefficientSet(grid, {std::move(s)});
        }

        if (name == "cellular-stream" || name == "shear-stream") {
            if (grid.dim() != 2) config_error(name + " preset needs dim = 2");
            const double amp = spec.value("amplitude", 1.0);
            const double k = spec.value("modes", 1) * two_pi_over_l;
            const bool cellular = name == "cellular-stream";
            auto h = node_field(grid, [&](const Point& x) {
                return cellular ? amp * std::sin(k * x[0]) * std::sin(k * x[1]) : amp * std::sin(k * x[1]);
            });
            auto stream = scalar_stream(grid, h);
            auto s = isotropic_slice(grid, spec);
            s.b = drift_from_stream(grid, stream);
            return CoefficientSet(grid, {std::move(s)}, {0}, DriftSource::stream, {std::move(stream)});
        }

        if (name == "constant-drift") {
            auto s = isotropic_slice(grid, spec);
            auto drift = spec.value("drift", std::vector<double>(static_cast<std::size_t>(grid.dim()), 1.0));
            if (static_cast<int>(drift.size()) != grid.dim()) config_error("drift needs one entry per axis");
            for (std::size_t p = 0; p < grid.nodes(); ++p)
                for (int a = 0; a < lay.n; ++a)
                    for (int i = 0; i < lay.m; ++i) s.b[lay.b_index(p, a, i, i)] = drift[static_cast<std::size_t>(a)];
            return CoefficientSet(grid, {std::move(s)});
        }

        if (name == "tabulated") {
            CoefficientSlice s;
            s.a = array_of(spec, "a", grid.nodes() * lay.a_block());
            s.c = spec.contains("c") ? array_of(spec, "c", grid.nodes() * lay.c_block())
                                     : std::vector<double>(grid.nodes() * lay.c_block(), 0.0);
            if (spec.contains("stream")) {
                StreamSlice stream{array_of(spec, "stream", grid.nodes() * lay.a_block())};
                s.b = drift_from_stream(grid, stream);
                return CoefficientSet(grid, {std::move(s)}, {0}, DriftSource::stream, {std::move(stream)});
            }
            s.b = spec.contains("b") ? array_of(spec, "b", grid.nodes() * lay.b_block())
                                     : std::vector<double>(grid.nodes() * lay.b_block(), 0.0);
            return CoefficientSet(grid, {std::move(s)});
        }
    } catch (const json::exception& e) {
        config_error(std::string("coefficient spec: ") + e.what());
    }
    config_error("unknown coefficient preset '" + name + "'");
}

} // namespace parabolic
