#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "weilchar/checks.hpp"

using namespace wc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const char* kTitles[] = {
    "",
    "semisimple character formula on every torus element of Sp_2(F_3,5,7) and the block tori of Sp_4(F_3)",
    "polarized formula on polarization-preserving semisimple elements",
    "cyclic tensor trace on 500 seeded chains",
    "twisted decomposition equals the direct twisted trace",
    "block sign formulas equal the oracle, ramified constants independent of eta",
    "composite intertwiner equals omega and the scalar split leaves traces unchanged",
    "finite-field lemmas and the eigenvalue s-th root lemma",
    "pi_0 torsion, restricted root types and descended roots",
    "equal eigenvalue multisets iff conjugate in Sp_2(F_3,5,7)",
    "weilchar selfcheck exits 0 within 10 minutes with a deterministic report",
};

void line(int k, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << k << ": " << kTitles[k] << " (" << detail << ")"
              << std::endl;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_command(const std::string& cmd) {
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string weilchar = argc > 1 ? argv[1] : "./weilchar";
    const std::string workdir = argc > 2 ? argv[2] : ".";
    CheckContext ctx;
    bool all = true;

    for (int k = 1; k <= 9; ++k) {
        auto checks = select_checks("", k);
        auto t0 = Clock::now();
        Report r = run_checks(checks, ctx, 1);
        const double secs = seconds_since(t0);
        bool pass = !checks.empty() && !r.rows.empty() && r.all_pass();
        std::ostringstream detail;
        detail << checks.size() << " checks, " << r.rows.size() << " rows, " << r.failures() << " failed, " << secs
               << " s";
        if (k == 1 && secs > 60) {
            pass = false;
            detail << " over the 60 s budget";
        }
        for (const auto& row : r.rows)
            if (!row.pass) detail << "; " << row.scenario << ": " << row.quantity;
        line(k, pass, detail.str());
        all = all && pass;
    }

    const std::string a = workdir + "/acceptance_selfcheck_a.json", b = workdir + "/acceptance_selfcheck_b.json";
    auto t0 = Clock::now();
    const int code_a = run_command(weilchar + " selfcheck --seed 7 --report " + a + " > /dev/null");
    const double secs = seconds_since(t0);
    const int code_b = run_command(weilchar + " selfcheck --seed 7 --jobs 4 --report " + b + " > /dev/null");
    const std::string ja = slurp(a), jb = slurp(b);
    const bool same = !ja.empty() && ja == jb;
    const bool pass10 = code_a == 0 && code_b == 0 && secs < 600 && same;
    std::ostringstream detail;
    detail << "exit " << code_a << " and " << code_b << ", " << secs << " s, reports "
           << (same ? "byte-identical" : "differ");
    line(10, pass10, detail.str());
    all = all && pass10;
    return all ? 0 : 1;
}
