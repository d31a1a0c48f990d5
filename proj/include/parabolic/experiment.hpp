#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "parabolic/config.hpp"
#include "parabolic/probes.hpp"
#include "parabolic/report.hpp"

namespace parabolic {

enum class Command { validate, solve, fundsol, probe, davies, fit };

/// Throws ConfigError for an unknown name.
Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Validated problem for the configured grid, optionally with another time
/// step and time range.
std::unique_ptr<Problem> make_problem(const ExperimentConfig& cfg, std::optional<double> dt = {},
                                      std::optional<double> t0 = {}, std::optional<double> t1 = {});
ProblemFactory problem_factory(const ExperimentConfig& cfg);

/// Gaussian bump exp(-|x - c|^2 / (2 w^2)) in every component, unit L2 norm.
SpaceField gaussian_bump(const Grid& grid, const Point& center, double width);

ReportTable run_validate(const ExperimentConfig& cfg, const std::filesystem::path& out);
ReportTable run_solve(const ExperimentConfig& cfg, const std::filesystem::path& out);
ReportTable run_fundsol(const ExperimentConfig& cfg, const std::filesystem::path& out);
ReportTable run_probe(const ExperimentConfig& cfg, const std::filesystem::path& out);
ReportTable run_davies(const ExperimentConfig& cfg, const std::filesystem::path& out);
ReportTable run_fit(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// Runs one subcommand and writes report.json / report.csv into `out`.
ReportTable run(Command command, const ExperimentConfig& cfg, const std::filesystem::path& out);

/// 0 when no row failed, 1 otherwise.
int exit_status(const ReportTable& report);

} // namespace parabolic
