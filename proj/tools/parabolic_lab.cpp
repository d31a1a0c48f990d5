#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "parabolic/config.hpp"
#include "parabolic/errors.hpp"
#include "parabolic/experiment.hpp"
#include "parabolic/suite.hpp"

namespace fs = std::filesystem;
using namespace parabolic;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string level = "smoke";
};

int run_command(const std::string& name, const Options& opt)
{
    if (name == "suite") {
        const auto level = parse_level(opt.level);
        const fs::path out = opt.out.empty() ? fs::path("suite-" + opt.level) : fs::path(opt.out);
        const auto res = run_suite(level, opt.seed.value_or(1), out);
        for (const auto& c : res.criteria) std::cout << format_line(c) << '\n';
        std::cout << (res.pass ? "PASS" : "FAIL") << " (" << res.seconds << " s), report in " << out.string() << '\n';
        return res.pass ? 0 : 1;
    }
    if (opt.config.empty()) throw LabError(ErrorKind::ConfigError, "--config is required for " + name);
    auto cfg = load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    fs::path out = opt.out.empty() ? fs::path(cfg.out_dir) : fs::path(opt.out);
    if (out.empty()) out = fs::path("out") / cfg.name;
    const auto report = run(parse_command(name), cfg, out);
    for (const auto& row : report.rows())
        std::cout << to_string(row.verdict) << ' ' << row.name << " = " << row.value << '\n';
    std::cout << (report.all_pass() ? "PASS" : "FAIL") << ", report in " << out.string() << '\n';
    return exit_status(report);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parabolic systems lab: fundamental solutions, probes and Gaussian bound checks"};
    app.require_subcommand(1);
    Options opt;
    const std::pair<const char*, const char*> commands[] = {
        {"validate", "check coefficients and report the measured constants"},
        {"solve", "Cauchy solve with energy and structure rows"},
        {"fundsol", "averaged fundamental solution columns, oracle, duality"},
        {"probe", "pointwise, scaling, decay and local boundedness probes"},
        {"davies", "twisted evolution growth against the constant budget"},
        {"fit", "Gaussian fit of the fundamental solution and verdict"},
        {"suite", "acceptance suite at --level smoke or full"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "experiment config (JSON)");
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--seed", opt.seed, "random seed, overrides the config");
        sub->add_option("--level", opt.level, "suite level")->check(CLI::IsMember({"smoke", "full"}));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return run_command(app.get_subcommands().front()->get_name(), opt);
    } catch (const LabError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
