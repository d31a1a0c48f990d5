#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "parabolic/fundsol.hpp"

namespace parabolic {

/// Shortest round-trip text of a double ("%.17g"); used by every CSV writer.
std::string format_double(double v);

/**
 * Writes `<stem>.csv` (level, t, x[, y], v_0..v_{m-1} per stored node) and
 * `<stem>.json` (source, grid, solver residuals and `extra`). Returns the CSV
 * path. Every `node_stride`-th node per axis is written.
 */
std::filesystem::path write_column(const std::filesystem::path& dir, const std::string& stem, const Grid& grid,
                                   const FundSolColumn& col, const nlohmann::json& extra = {}, int node_stride = 1);

nlohmann::json grid_json(const Grid& grid);

} // namespace parabolic
