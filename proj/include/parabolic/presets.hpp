#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "parabolic/coefficients.hpp"
#include "parabolic/lattice.hpp"

namespace parabolic {

/// Names accepted in the "preset" field of a coefficient specification.
const std::vector<std::string>& coefficient_preset_names();

/**
 * Builds (unvalidated) coefficients from a JSON coefficient specification:
 *
 *   {"preset": "identity",        "diffusivity": 1.0}
 *   {"preset": "anisotropic",     "diagonal": [1.0, 4.0]}
 *   {"preset": "skew",            "diffusivity": 1.0, "skew": 0.5}
 *   {"preset": "cellular-stream", "amplitude": 1.0, "modes": 1}
 *   {"preset": "shear-stream",    "amplitude": 1.0, "modes": 1}
 *   {"preset": "constant-drift",  "drift": [1.0]}
 *   {"preset": "tabulated", "a": [...], "b": [...], "c": [...]}   (or "stream" instead of "b")
 *
 * Every preset accepts "diffusivity" (scalar a in A = a I, or a list with one
 * value per component) and "zeroth" (C = zeroth * I). Throws ConfigError.
 */
CoefficientSet make_coefficients(const Grid& grid, const nlohmann::json& spec);

/// Stream matrix Phi^{12} = -Phi^{21} = H(x) I_m for a scalar node field H.
StreamSlice scalar_stream(const Grid& grid, const std::vector<double>& h);

} // namespace parabolic
