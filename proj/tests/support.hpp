#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "parabolic/config.hpp"
#include "parabolic/errors.hpp"
#include "parabolic/experiment.hpp"

namespace testsupport {

using nlohmann::json;

// splitmix64; small, portable and fully specified so failures replay anywhere.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    double normal()
    {
        const double u1 = uniform(1e-300, 1.0), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    std::vector<double> vector(std::size_t n, double lo = -1.0, double hi = 1.0)
    {
        std::vector<double> v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }
    template <class T>
    const T& pick(const std::vector<T>& v)
    {
        return v[next() % v.size()];
    }

private:
    std::uint64_t state_;
};

inline json grid_spec(int dim, int comps, double side, int cells, double dt, double t0, double t1)
{
    return {{"dim", dim}, {"components", comps}, {"side", side}, {"cells", cells}, {"dt", dt}, {"t0", t0}, {"t1", t1}};
}

inline json config(const json& grid, const json& coeffs)
{
    return {{"schema_version", parabolic::kConfigSchemaVersion}, {"name", "test"}, {"grid", grid},
            {"coefficients", coeffs}};
}

inline std::unique_ptr<parabolic::Problem> problem(const json& grid, const json& coeffs)
{
    return parabolic::make_problem(parabolic::parse_config(config(grid, coeffs)));
}

inline json heat() { return {{"preset", "identity"}}; }
inline json cellular(double amplitude = 1.0) { return {{"preset", "cellular-stream"}, {"amplitude", amplitude}, {"modes", 1}}; }

inline constexpr double two_pi = 2.0 * std::numbers::pi;

} // namespace testsupport
