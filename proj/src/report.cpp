#include "weilchar/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace wc {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ReportRow compare_row(const std::string& scenario, const std::string& quantity, cplx formula, cplx oracle,
                      double tolerance) {
    ReportRow r;
    r.scenario = scenario;
    r.quantity = quantity;
    r.formula = formula;
    r.oracle = oracle;
    r.tolerance = tolerance;
    r.abs_error = finite(formula) && finite(oracle) ? std::abs(formula - oracle) : std::nan("");
    r.pass = std::isfinite(r.abs_error) && r.abs_error <= tolerance;
    return r;
}

ReportRow exact_row(const std::string& scenario, const std::string& quantity, long long formula, long long oracle) {
    ReportRow r;
    r.scenario = scenario;
    r.quantity = quantity;
    r.formula = cplx(static_cast<double>(formula), 0);
    r.oracle = cplx(static_cast<double>(oracle), 0);
    r.abs_error = std::abs(static_cast<double>(formula - oracle));
    r.tolerance = 0;
    r.exact = true;
    r.pass = formula == oracle;
    return r;
}

ReportRow error_row(const std::string& scenario, const std::string& quantity, const std::string& note) {
    ReportRow r;
    r.scenario = scenario;
    r.quantity = quantity;
    r.formula = r.oracle = cplx(std::nan(""), 0);
    r.abs_error = std::nan("");
    r.pass = false;
    r.note = note;
    return r;
}

void WorstCase::add(cplx formula, cplx oracle) {
    ++n_;
    if (!finite(formula) || !finite(oracle)) {
        if (!nan_) f_ = formula, o_ = oracle;
        nan_ = true;
        return;
    }
    double e = std::abs(formula - oracle);
    if (!nan_ && e > worst_) {
        worst_ = e;
        f_ = formula;
        o_ = oracle;
    }
}

ReportRow WorstCase::row(const std::string& scenario, const std::string& quantity) const {
    if (n_ == 0) {
        ReportRow r = error_row(scenario, quantity, "no cases");
        r.cases = 0;
        return r;
    }
    ReportRow r = compare_row(scenario, quantity, f_, o_, tol_);
    r.cases = n_;
    return r;
}

void ExactTally::add(long long formula, long long oracle) {
    ++n_;
    if (formula == oracle) {
        ++agree_;
        if (!have_bad_ && n_ == 1) first_f_ = formula, first_o_ = oracle;
    } else if (!have_bad_) {
        have_bad_ = true;
        first_f_ = formula;
        first_o_ = oracle;
    }
}

ReportRow ExactTally::row(const std::string& scenario, const std::string& quantity) const {
    ReportRow r = exact_row(scenario, quantity, agree_, n_);
    r.cases = n_;
    if (n_ == 0) {
        r.pass = false;
        r.note = "no cases";
    } else if (have_bad_) {
        std::ostringstream os;
        os << "first disagreement: " << first_f_ << " vs " << first_o_;
        r.note = os.str();
    }
    return r;
}

bool Report::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

long long Report::failures() const {
    long long n = 0;
    for (const auto& r : rows) n += !r.pass;
    return n;
}

namespace {

nlohmann::json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

nlohmann::json cnum(cplx z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

std::string fmt_double(double x) {
    if (!std::isfinite(x)) return "nan";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

std::string to_json(const Report& r, bool timings) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json j = {
            {"scenario", row.scenario}, {"quantity", row.quantity}, {"formula", cnum(row.formula)},
            {"oracle", cnum(row.oracle)}, {"abs_error", num(row.abs_error)}, {"tolerance", row.tolerance},
            {"exact", row.exact},        {"pass", row.pass},         {"cases", row.cases},
            {"seed", row.seed},          {"source", row.source},     {"note", row.note},
        };
        if (timings) j["timing_ms"] = row.timing_ms;
        rows.push_back(std::move(j));
    }
    nlohmann::json doc = {
        {"rows", rows},
        {"summary", {{"rows", r.rows.size()}, {"failed", r.failures()}, {"pass", r.all_pass()}, {"seed", r.seed}}},
    };
    return doc.dump(2) + "\n";
}

std::string to_csv(const Report& r, bool timings) {
    std::ostringstream os;
    os << "scenario,quantity,formula_re,formula_im,oracle_re,oracle_im,abs_error,tolerance,exact,pass,cases,seed,source,"
          "note";
    if (timings) os << ",timing_ms";
    os << "\n";
    for (const auto& row : r.rows) {
        os << csv_field(row.scenario) << ',' << csv_field(row.quantity) << ',' << fmt_double(row.formula.real()) << ','
           << fmt_double(row.formula.imag()) << ',' << fmt_double(row.oracle.real()) << ','
           << fmt_double(row.oracle.imag()) << ',' << fmt_double(row.abs_error) << ',' << fmt_double(row.tolerance)
           << ',' << (row.exact ? "true" : "false") << ',' << (row.pass ? "true" : "false") << ',' << row.cases << ','
           << row.seed << ',' << csv_field(row.source) << ',' << csv_field(row.note);
        if (timings) os << ',' << fmt_double(row.timing_ms);
        os << "\n";
    }
    return os.str();
}

}  // namespace wc
