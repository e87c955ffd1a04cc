#pragma once

// Scenario files: a JSON document {"scenarios": [{id, kind, tolerance?,
// payload}]}.  Each scenario compares formula values with oracle values and
// yields report rows.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "weilchar/report.hpp"

namespace wc {

struct Scenario {
    std::string id;
    std::string kind;
    double tolerance = -1;  // negative: use the run default
    nlohmann::json payload;
};

struct RunOptions {
    std::uint64_t seed = 1;
    double tolerance = 1e-8;
    int jobs = 1;
    bool fault_sgn = false;
};

const std::vector<std::string>& scenario_kinds();

// ParseError on malformed JSON; ValidationError on a document that does not
// follow the schema (unknown kind, duplicate id, missing fields).
std::vector<Scenario> parse_scenarios(const std::string& text);
std::vector<Scenario> load_scenarios(const std::string& path);

// Checks every payload before anything runs; ValidationError names the
// offending scenario.  Execution errors become failed rows.
Report run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& opts);

// Restriction data of every root-datum scenario, as JSON.
nlohmann::json describe_root_data(const std::vector<Scenario>& scenarios);

// Ramified constants for all configurations within the caps, and explicit
// refusal rows for requests beyond them.
nlohmann::json tabulate_ramified(const std::vector<int>& primes, int max_degree);
std::string ramified_table_csv(const nlohmann::json& table);

}  // namespace wc
