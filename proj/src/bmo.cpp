#include "parabolic/bmo.hpp"

#include <cmath>

#include "parabolic/errors.hpp"

namespace parabolic {

namespace {

void require_cubes(const Grid& grid, std::span<const double> phi)
{
    if (grid.cells() < 8) throw LabError(ErrorKind::UnresolvableCube, "BMO estimate needs at least 8 cells per axis");
    if (phi.size() != grid.nodes()) throw LabError(ErrorKind::ShapeMismatch, "BMO input must be a scalar node field");
}

// Mean oscillation over the aligned cube of `side` cells whose lower corner is (ox, oy).
double cube_oscillation(const Grid& grid, std::span<const double> phi, int side, int ox, int oy)
{
    const int ny = grid.dim() == 2 ? side : 1;
    double sum = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < side; ++i) sum += phi[grid.node_at(ox + i, oy + j)];
    const double count = static_cast<double>(side) * ny;
    const double mean = sum / count;
    double osc = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < side; ++i) osc += std::abs(phi[grid.node_at(ox + i, oy + j)] - mean);
    return osc / count;
}

} // namespace

double bmo_norm(const Grid& grid, std::span<const double> phi)
{
    require_cubes(grid, phi);
    const int n = grid.cells();
    double best = 0.0;
    for (int side = n; side >= 4; side /= 2) {
        const int per_axis = n / side;
        const int cubes = grid.dim() == 2 ? per_axis * per_axis : per_axis;
#pragma omp parallel for reduction(max : best) schedule(static)
        for (int q = 0; q < cubes; ++q) {
            const int ox = (q % per_axis) * side;
            const int oy = (q / per_axis) * side;
            best = std::max(best, cube_oscillation(grid, phi, side, ox, oy));
        }
    }
    return best;
}

double bmo_norm_serial(const Grid& grid, std::span<const double> phi)
{
    require_cubes(grid, phi);
    const int n = grid.cells();
    double best = 0.0;
    for (int side = n; side >= 4; side /= 2) {
        const int per_axis = n / side;
        const int ny = grid.dim() == 2 ? per_axis : 1;
        for (int qy = 0; qy < ny; ++qy)
            for (int qx = 0; qx < per_axis; ++qx)
                best = std::max(best, cube_oscillation(grid, phi, side, qx * side, qy * side));
    }
    return best;
}

double theta_of(const Grid& grid, const std::vector<StreamSlice>& stream)
{
    const CoefficientLayout lay{grid.dim(), grid.components()};
    std::vector<double> sup(lay.a_block(), 0.0);
    std::vector<double> comp(grid.nodes());
    for (const auto& s : stream) {
        if (s.phi.size() != grid.nodes() * lay.a_block())
            throw LabError(ErrorKind::ShapeMismatch, "stream slice has the wrong size");
        for (std::size_t e = 0; e < lay.a_block(); ++e) {
            for (std::size_t p = 0; p < grid.nodes(); ++p) comp[p] = s.phi[p * lay.a_block() + e];
            sup[e] = std::max(sup[e], bmo_norm(grid, comp));
        }
    }
    double sq = 0.0;
    for (double v : sup) sq += v * v;
    return std::sqrt(sq);
}

} // namespace parabolic
