#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "parabolic/report.hpp"

namespace parabolic {

enum class SuiteLevel { smoke, full };

/// Throws ConfigError for anything but "smoke" / "full".
SuiteLevel parse_level(const std::string& name);
std::string to_string(SuiteLevel level);

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    /// One-line summary of the deciding numbers.
    std::string summary;
    ReportTable table;
    double seconds = 0.0;
};

/// Acceptance criteria 1..12.
const std::vector<int>& criterion_ids();
std::string criterion_title(int id);

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    bool pass = false;
    double seconds = 0.0;
};

/**
 * Runs the listed criteria (all when empty) at `level`, writes every CSV
 * under `out` and an aggregated report.json / report.csv. smoke uses coarse
 * grids; full uses the acceptance resolutions.
 */
SuiteResult run_suite(SuiteLevel level, std::uint64_t seed, const std::filesystem::path& out,
                      std::vector<int> ids = {});

/// "[PASS] 1 oracle convergence: ..." style line.
std::string format_line(const CriterionResult& r);

} // namespace parabolic
