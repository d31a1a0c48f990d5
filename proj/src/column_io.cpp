#include "parabolic/column_io.hpp"

#include <cstdio>
#include <fstream>

#include "parabolic/errors.hpp"

namespace parabolic {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json grid_json(const Grid& grid)
{
    return {{"dim", grid.dim()},   {"components", grid.components()}, {"side", grid.side()},
            {"cells", grid.cells()}, {"dt", grid.dt()},               {"t0", grid.t0()},
            {"t1", grid.t1()}};
}

std::filesystem::path write_column(const std::filesystem::path& dir, const std::string& stem, const Grid& grid,
                                   const FundSolColumn& col, const nlohmann::json& extra, int node_stride)
{
    std::filesystem::create_directories(dir);
    const auto csv = dir / (stem + ".csv");
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw LabError(ErrorKind::ConfigError, "cannot write " + csv.string());
    out << "level,t,x";
    if (grid.dim() == 2) out << ",y";
    for (int i = 0; i < grid.components(); ++i) out << ",v" << i;
    out << '\n';
    for (std::size_t k = 0; k < col.field.count(); ++k) {
        const int level = col.field.level_at(k);
        const SpaceField& v = col.field.slice(k);
        for (std::size_t p = 0; p < grid.nodes(); ++p) {
            const auto c = grid.node_coords(p);
            if (c[0] % node_stride != 0 || c[1] % node_stride != 0) continue;
            const auto x = grid.position(p);
            out << level << ',' << format_double(grid.time(level)) << ',' << format_double(x[0]);
            if (grid.dim() == 2) out << ',' << format_double(x[1]);
            for (int i = 0; i < grid.components(); ++i) out << ',' << format_double(v(p, i));
            out << '\n';
        }
    }

    nlohmann::json side = {
        {"source", {{"s", col.source.Y.t}, {"y", {col.source.Y.x[0], col.source.Y.x[1]}}, {"k", col.source.k},
                    {"eps", col.source.eps}}},
        {"grid", grid_json(grid)},
        {"start_level", col.set.start_level},
        {"stride", col.field.stride()},
        {"node_stride", node_stride},
        {"solver", {{"max_residual", col.stats.max_residual}, {"solves", col.stats.solves}}},
    };
    if (!extra.is_null()) side["extra"] = extra;
    std::ofstream js(dir / (stem + ".json"), std::ios::binary);
    js << side.dump(2) << '\n';
    return csv;
}

} // namespace parabolic
