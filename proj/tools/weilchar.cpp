#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "weilchar/checks.hpp"
#include "weilchar/runner.hpp"

using namespace wc;

namespace {

struct Flags {
    std::string report;
    std::string format = "json";
    std::uint64_t seed = 1;
    int jobs = 1;
    double tolerance = 1e-8;
    std::string fault;
    std::string filter;
    bool timings = false;
};

int exit_code_for(Errc c) {
    if (c == Errc::ParseError) return 2;
    if (c == Errc::ValidationError) return 3;
    return 1;
}

void write_output(const Flags& f, const std::string& text) {
    if (f.report.empty() || f.report == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(f.report, std::ios::binary);
    if (!out) throw Error(Errc::ValidationError, "cannot write '" + f.report + "'");
    out << text;
}

void summarize(const Report& r) {
    std::ostream& os = std::cerr;
    for (const auto& row : r.rows)
        if (!row.pass)
            os << "FAIL " << row.scenario << " | " << row.quantity << " | formula " << row.formula << " oracle "
               << row.oracle << " error " << row.abs_error << (row.note.empty() ? "" : " | " + row.note) << "\n";
    os << r.rows.size() << " rows, " << r.failures() << " failed, seed " << r.seed << "\n";
}

int emit(const Report& r, const Flags& f) {
    if (!f.report.empty()) write_output(f, f.format == "csv" ? to_csv(r, f.timings) : to_json(r, f.timings));
    summarize(r);
    return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-field Weil character formulas checked against brute-force oracles"};
    app.require_subcommand(1);
    Flags f;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--report", f.report, "Report path, or - for standard output");
        sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", f.seed, "Seed of every randomized check");
        sub->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--tolerance", f.tolerance, "Default absolute tolerance")->check(CLI::NonNegativeNumber);
        sub->add_option("--fault", f.fault, "Inject a fault into the sign formulas")->check(CLI::IsMember({"sgn"}));
        sub->add_flag("--timings", f.timings, "Include per-row timings in the report");
    };

    std::string file;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("file", file, "Scenario file")->required();
    common(run);

    auto* self = app.add_subcommand("selfcheck", "Run the built-in invariant suite");
    common(self);
    self->add_option("--filter", f.filter, "Module name or check id");

    std::vector<int> primes = {3, 5};
    int max_degree = 4;
    auto* tab = app.add_subcommand("tabulate-ramified", "Tabulate the ramified sign constants");
    common(tab);
    tab->add_option("--primes", primes, "Primes to tabulate")->delimiter(',');
    tab->add_option("--max-degree", max_degree, "Largest degree of k_alpha")->check(CLI::PositiveNumber);

    std::string rd_file;
    auto* rd = app.add_subcommand("root-datum", "Describe the root data of a scenario file");
    rd->add_option("file", rd_file, "Scenario file")->required();
    common(rd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            RunOptions o{f.seed, f.tolerance, f.jobs, f.fault == "sgn"};
            return emit(run_scenarios(load_scenarios(file), o), f);
        }
        if (*self) {
            auto checks = select_checks(f.filter);
            if (checks.empty()) throw Error(Errc::ValidationError, "no check matches '" + f.filter + "'");
            CheckContext ctx{f.seed, f.tolerance, f.fault == "sgn"};
            return emit(run_checks(checks, ctx, f.jobs), f);
        }
        if (*tab) {
            auto table = tabulate_ramified(primes, max_degree);
            std::string text = f.format == "csv" ? ramified_table_csv(table) : table.dump(2) + "\n";
            if (f.report.empty()) std::cout << text;
            else write_output(f, text);
            return 0;
        }
        if (*rd) {
            auto text = describe_root_data(load_scenarios(rd_file)).dump(2) + "\n";
            if (f.report.empty()) std::cout << text;
            else write_output(f, text);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
