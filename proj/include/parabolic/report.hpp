#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace parabolic {

enum class Verdict { pass, fail, info };

std::string to_string(Verdict v);

struct ReportRow {
    std::string name;
    /// Label of the estimate the row checks, e.g. "energy-inequality".
    std::string estimate;
    double value = 0.0;
    /// Threshold the verdict compares against (NaN for info rows).
    double threshold = 0.0;
    Verdict verdict = Verdict::info;
    std::string detail;
    /// Wall-clock rows: the value is kept out of report.csv so CSVs stay reproducible.
    bool timing = false;
};

/// Ordered result rows of one run, each traceable to the config hash.
class ReportTable {
public:
    ReportTable() = default;
    ReportTable(std::string name, std::string config_hash) : name_(std::move(name)), hash_(std::move(config_hash)) {}

    void add(ReportRow row) { rows_.push_back(std::move(row)); }
    void info(const std::string& name, const std::string& estimate, double value, const std::string& detail = {});
    /// Pass iff value <= threshold.
    void at_most(const std::string& name, const std::string& estimate, double value, double threshold,
                 const std::string& detail = {});
    void at_least(const std::string& name, const std::string& estimate, double value, double threshold,
                  const std::string& detail = {});
    void check(const std::string& name, const std::string& estimate, bool ok, double value, double threshold,
               const std::string& detail = {});
    /// Pass iff seconds <= limit; a timing row.
    void timing(const std::string& name, double seconds, double limit, std::string detail = {});
    void append(const ReportTable& other);

    const std::vector<ReportRow>& rows() const noexcept { return rows_; }
    const std::string& config_hash() const noexcept { return hash_; }
    void set_config_hash(std::string hash) { hash_ = std::move(hash); }
    bool all_pass() const noexcept;

    nlohmann::json to_json() const;
    /// Writes report.json and report.csv into `dir`.
    void write(const std::filesystem::path& dir, const nlohmann::json& extra = {}) const;

private:
    std::string name_;
    std::string hash_;
    std::vector<ReportRow> rows_;
};

} // namespace parabolic
