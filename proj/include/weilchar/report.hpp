#pragma once

// Report rows comparing a formula value with an oracle value, and their JSON
// and CSV renderings.

#include <cstdint>
#include <string>
#include <vector>

#include "weilchar/weil.hpp"

namespace wc {

struct ReportRow {
    std::string scenario;
    std::string quantity;
    cplx formula = 0;
    cplx oracle = 0;
    double abs_error = 0;
    double tolerance = 1e-8;
    bool exact = false;   // integer comparison
    bool pass = false;
    long long cases = 1;  // comparisons folded into the row
    double timing_ms = 0;
    std::uint64_t seed = 0;
    std::string source;   // provenance of the formula value
    std::string note;
};

// Floating comparison; the row carries the pair itself.  NaN never passes.
ReportRow compare_row(const std::string& scenario, const std::string& quantity, cplx formula, cplx oracle,
                      double tolerance);
// Exact integer comparison.
ReportRow exact_row(const std::string& scenario, const std::string& quantity, long long formula, long long oracle);
// A failed row recording an exception or a refusal.
ReportRow error_row(const std::string& scenario, const std::string& quantity, const std::string& note);

// Folds many comparisons into the row of the worst pair.
class WorstCase {
public:
    explicit WorstCase(double tolerance) : tol_(tolerance) {}
    void add(cplx formula, cplx oracle);
    long long count() const { return n_; }
    ReportRow row(const std::string& scenario, const std::string& quantity) const;

private:
    double tol_;
    long long n_ = 0;
    double worst_ = -1;
    bool nan_ = false;
    cplx f_ = 0, o_ = 0;
};

// Counts agreements of two integer-valued quantities.
class ExactTally {
public:
    void add(long long formula, long long oracle);
    void add(bool agree) { add(agree ? 1 : 0, 1); }
    ReportRow row(const std::string& scenario, const std::string& quantity) const;

private:
    long long n_ = 0, agree_ = 0;
    long long first_f_ = 0, first_o_ = 0;
    bool have_bad_ = false;
};

struct Report {
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    bool all_pass() const;
    long long failures() const;
};

// Sorted keys, fixed indentation.  Timings are written only when asked, so
// that two runs with the same inputs produce identical bytes.
std::string to_json(const Report& r, bool timings);
std::string to_csv(const Report& r, bool timings);

}  // namespace wc
