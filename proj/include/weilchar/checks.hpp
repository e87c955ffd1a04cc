#pragma once

// The built-in invariant suite behind `weilchar selfcheck` and the
// acceptance binary.  Every check compares formula values with brute-force
// oracles and returns report rows.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "weilchar/report.hpp"

namespace wc {

struct CheckContext {
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    bool fault_sgn = false;  // negate every sign-formula value
};

struct Check {
    std::string module;
    std::string name;
    std::vector<int> criteria;  // acceptance criteria the check serves
    std::function<std::vector<ReportRow>(const CheckContext&)> run;
    std::string id() const { return module + "/" + name; }
};

const std::vector<Check>& builtin_checks();

// Checks whose module or id matches filter (empty matches all), restricted to
// a criterion when criterion > 0.
std::vector<const Check*> select_checks(const std::string& filter, int criterion = 0);

// Runs checks on up to jobs threads; rows keep the order of the checks.  An
// exception inside a check becomes a failed row.
Report run_checks(const std::vector<const Check*>& checks, const CheckContext& ctx, int jobs);

}  // namespace wc
