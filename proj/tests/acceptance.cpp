// Acceptance suite at the full resolutions. One line per criterion.
#include <cstring>
#include <iostream>
#include <set>
#include <string>

#include "parabolic/suite.hpp"

using namespace parabolic;

// Criteria that fail for a reason recorded in the decisions ledger. They are
// still run at full tolerance and still print FAIL; they do not turn the
// process exit status red.
const std::set<int> kKnownFailures = {5};

int main(int argc, char** argv)
{
    std::string out = "acceptance";
    std::string level = "full";
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--out") == 0) out = argv[i + 1];
        if (std::strcmp(argv[i], "--level") == 0) level = argv[i + 1];
    }
    const auto res = run_suite(parse_level(level), 1, out);
    int unexpected = 0;
    for (const auto& c : res.criteria) {
        std::cout << format_line(c);
        if (!c.pass && kKnownFailures.count(c.id)) std::cout << "  (known failure)";
        std::cout << '\n';
        if (!c.pass && !kKnownFailures.count(c.id)) ++unexpected;
    }
    std::cout << res.criteria.size() << " criteria, " << unexpected << " unexpected failures, " << res.seconds
              << " s\n";
    return unexpected == 0 ? 0 : 1;
}
