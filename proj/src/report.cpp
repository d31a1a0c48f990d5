#include "parabolic/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "parabolic/column_io.hpp"

namespace parabolic {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::info: return "INFO";
    }
    return "INFO";
}

void ReportTable::info(const std::string& name, const std::string& estimate, double value, const std::string& detail)
{
    add({name, estimate, value, std::numeric_limits<double>::quiet_NaN(), Verdict::info, detail});
}

void ReportTable::at_most(const std::string& name, const std::string& estimate, double value, double threshold,
                          const std::string& detail)
{
    check(name, estimate, value <= threshold, value, threshold, detail);
}

void ReportTable::at_least(const std::string& name, const std::string& estimate, double value, double threshold,
                           const std::string& detail)
{
    check(name, estimate, value >= threshold, value, threshold, detail);
}

void ReportTable::check(const std::string& name, const std::string& estimate, bool ok, double value,
                        double threshold, const std::string& detail)
{
    add({name, estimate, value, threshold, ok ? Verdict::pass : Verdict::fail, detail});
}

void ReportTable::timing(const std::string& name, double seconds, double limit, std::string detail)
{
    ReportRow row{name, "runtime", seconds, limit, seconds <= limit ? Verdict::pass : Verdict::fail, std::move(detail)};
    row.timing = true;
    add(std::move(row));
}

void ReportTable::append(const ReportTable& other)
{
    rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

bool ReportTable::all_pass() const noexcept
{
    for (const auto& r : rows_)
        if (r.verdict == Verdict::fail) return false;
    return true;
}

nlohmann::json ReportTable::to_json() const
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json row = {{"name", r.name}, {"estimate", r.estimate}, {"verdict", to_string(r.verdict)}};
        row["value"] = std::isfinite(r.value) ? nlohmann::json(r.value) : nlohmann::json(format_double(r.value));
        if (!std::isnan(r.threshold)) row["threshold"] = r.threshold;
        if (!r.detail.empty()) row["detail"] = r.detail;
        rows.push_back(row);
    }
    return {{"name", name_}, {"config_hash", hash_}, {"pass", all_pass()}, {"rows", rows}};
}

void ReportTable::write(const std::filesystem::path& dir, const nlohmann::json& extra) const
{
    std::filesystem::create_directories(dir);
    auto j = to_json();
    if (!extra.is_null()) j["extra"] = extra;
    std::ofstream(dir / "report.json", std::ios::binary) << j.dump(2) << '\n';
    std::ofstream csv(dir / "report.csv", std::ios::binary);
    csv << "name,estimate,value,threshold,verdict,config_hash\n";
    for (const auto& r : rows_)
        csv << r.name << ',' << r.estimate << ',' << (r.timing ? std::string() : format_double(r.value)) << ','
            << (std::isnan(r.threshold) ? std::string() : format_double(r.threshold)) << ',' << to_string(r.verdict)
            << ',' << hash_ << '\n';
}

} // namespace parabolic
