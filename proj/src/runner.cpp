#include "weilchar/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "weilchar/fixtures.hpp"
#include "weilchar/gerardin.hpp"
#include "weilchar/lattice.hpp"
#include "weilchar/signcalc.hpp"

namespace wc {

using nlohmann::json;

namespace {

using Rows = std::vector<ReportRow>;
using Job = std::function<Rows()>;

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::ValidationError, msg); }

const json& need(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) invalid("missing field '" + key + "'");
    return j.at(key);
}

int get_int(const json& j, const std::string& key) {
    const json& v = need(j, key);
    if (!v.is_number_integer()) invalid("field '" + key + "' must be an integer");
    return v.get<int>();
}

int get_int(const json& j, const std::string& key, int def) { return j.contains(key) ? get_int(j, key) : def; }

bool get_bool(const json& j, const std::string& key, bool def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) invalid("field '" + key + "' must be a boolean");
    return j.at(key).get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
    const json& v = need(j, key);
    if (!v.is_string()) invalid("field '" + key + "' must be a string");
    return v.get<std::string>();
}

int get_prime(const json& j) {
    int p = get_int(j, "p");
    if (p < 3 || !is_prime(p)) invalid("p must be an odd prime");
    return p;
}

std::vector<std::vector<long long>> get_int_rows(const json& v, const std::string& what) {
    if (!v.is_array()) invalid(what + " must be an array of rows");
    std::vector<std::vector<long long>> rows;
    for (const auto& r : v) {
        if (!r.is_array()) invalid(what + " must be an array of rows");
        std::vector<long long> row;
        for (const auto& x : r) {
            if (!x.is_number_integer()) invalid(what + " entries must be integers");
            row.push_back(x.get<long long>());
        }
        if (!rows.empty() && row.size() != rows.front().size()) invalid(what + " rows differ in length");
        rows.push_back(row);
    }
    return rows;
}

FpMat get_mat(const json& v, int p, int dim, const std::string& what) {
    auto rows = get_int_rows(v, what);
    if (static_cast<int>(rows.size()) != dim || (dim > 0 && static_cast<int>(rows.front().size()) != dim))
        invalid(what + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
    return FpMat::from_rows(p, rows);
}

FieldElem get_elem(const json& v, int p, const std::string& what) {
    if (v.is_number_integer()) return FieldElem::from_int(gf(p, 1), v.get<long long>());
    if (!v.is_string()) invalid(what + " must be a field element string such as \"3^2:0,1\"");
    FieldElem x = parse_field_elem(v.get<std::string>());
    if (x.F->p() != p) invalid(what + " lies in the wrong characteristic");
    return x;
}

Perm get_perm(const json& v, const std::string& what) {
    if (!v.is_array()) invalid(what + " must be an array");
    Perm r;
    for (const auto& x : v) {
        if (!x.is_number_integer()) invalid(what + " entries must be integers");
        r.push_back(x.get<int>());
    }
    return r;
}

OrbitAction get_action(const json& j) {
    OrbitAction a;
    a.size = get_int(j, "size");
    a.neg = get_perm(need(j, "neg"), "action.neg");
    a.theta = get_perm(need(j, "theta"), "action.theta");
    if (j.contains("gamma_gens")) {
        if (!j.at("gamma_gens").is_array()) invalid("action.gamma_gens must be an array");
        for (const auto& g : j.at("gamma_gens")) a.gamma_gens.push_back(get_perm(g, "action.gamma_gens"));
    }
    return a;
}

OrbitScenario get_orbit_scenario(const json& j) {
    OrbitScenario sc;
    sc.p = get_prime(j);
    sc.classification = parse_branch(get_string(j, "branch"));
    sc.deg_alpha = get_int(j, "deg_alpha");
    sc.deg_pm_alpha = get_int(j, "deg_pm_alpha");
    sc.deg_res = get_int(j, "deg_res");
    sc.deg_pm_res = get_int(j, "deg_pm_res");
    sc.sigma_exp = get_int(j, "sigma_exp", 1);
    sc.m = get_int(j, "m", 1);
    sc.l = get_int(j, "l", 1);
    sc.alpha = get_int(j, "alpha", -1);
    sc.C = get_elem(need(j, "C"), sc.p, "C");
    sc.eta_alpha = get_elem(need(j, "eta_alpha"), sc.p, "eta_alpha");
    sc.eta_minus_alpha =
        j.contains("eta_minus_alpha") ? get_elem(j.at("eta_minus_alpha"), sc.p, "eta_minus_alpha") : sc.eta_alpha;
    return sc;
}

RootDatum get_root_datum(const json& j) {
    if (j.contains("catalogue")) {
        const std::string name = get_string(j, "catalogue");
        auto names = catalogue_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) invalid("unknown catalogue datum '" + name + "'");
        return catalogue(name);
    }
    RootDatum d;
    d.name = j.contains("name") ? get_string(j, "name") : "custom";
    d.rank = get_int(j, "rank");
    auto to_vecs = [](const std::vector<std::vector<long long>>& rows) {
        std::vector<IVec> out;
        for (const auto& r : rows) out.push_back(IVec(r.begin(), r.end()));
        return out;
    };
    d.roots = to_vecs(get_int_rows(need(j, "roots"), "roots"));
    d.coroots = to_vecs(get_int_rows(need(j, "coroots"), "coroots"));
    d.theta = to_vecs(get_int_rows(need(j, "theta"), "theta"));
    return d;
}

double tol_of(const Scenario& s, const RunOptions& o) { return s.tolerance >= 0 ? s.tolerance : o.tolerance; }

cplx snapped(cplx z, int p) {
    long long a, b;
    if (!snap_quadratic(z, p, a, b)) return cplx(std::nan(""), 0);
    const double r = std::sqrt(static_cast<double>(p));
    return p % 4 == 1 ? cplx(a + b * r, 0) : cplx(static_cast<double>(a), b * r);
}

// ---------------------------------------------------------------------------

Job weil_verify(const Scenario& s, const RunOptions& o) {
    const json& pl = s.payload;
    const int p = get_prime(pl), n = get_int(pl, "n", 1);
    SympSpace C = canonical_space(p, n);
    FpMat g = get_mat(need(pl, "g"), p, 2 * n, "g");
    require_symplectic(C, g);
    std::optional<FpMat> h;
    if (pl.contains("h")) {
        h = get_mat(pl.at("h"), p, 2 * n, "h");
        require_symplectic(C, *h);
    }
    const double tol = tol_of(s, o);
    return [=] {
        Rows rows;
        CMat W = omega_canonical(p, n, g);
        double dev = 0;
        for (int i = 0; i < 2 * n; ++i) {
            Vec v(2 * n, 0);
            v[i] = 1;
            dev = std::max(dev, (W * rho_canonical(p, n, v, 0) - rho_canonical(p, n, g.apply(v), 0) * W).cwiseAbs().maxCoeff());
        }
        rows.push_back(compare_row("", "omega(g) rho(v) - rho(g v) omega(g)", dev, 0, tol));
        rows.push_back(compare_row("", "omega(g) omega(g)^* - 1",
                                   (W * W.adjoint() - CMat::Identity(W.rows(), W.cols())).cwiseAbs().maxCoeff(), 0, tol));
        cplx tr = W.trace();
        rows.push_back(compare_row("", "trace snapped to Z + Z sqrt(+-p) vs trace", snapped(tr, p), tr, tol));
        if (h) {
            CMat Wh = omega_canonical(p, n, *h), Wgh = omega_canonical(p, n, g * *h);
            rows.push_back(compare_row("", "omega(g) omega(h) - omega(gh)", (W * Wh - Wgh).cwiseAbs().maxCoeff(), 0, tol));
        }
        return rows;
    };
}

Job gerardin_job(const Scenario& s, const RunOptions& o) {
    const json& pl = s.payload;
    const int p = get_prime(pl), n = get_int(pl, "n", 1);
    SympSpace V = standard_space(p, n);
    std::optional<Torus> T;
    std::vector<FieldElem> coords;
    FpMat g;
    if (pl.contains("torus")) {
        TorusDesc d;
        std::stringstream ss(get_string(pl, "torus"));
        std::string part;
        while (std::getline(ss, part, '+')) {
            if (part.size() < 2 || (part[0] != 'S' && part[0] != 'N')) invalid("torus must look like N1+S1");
            d.factors.push_back({part[0] == 'S', std::stoi(part.substr(1))});
        }
        T = build_torus(d, V);
    }
    if (pl.contains("coords")) {
        if (!T) invalid("coords need a torus");
        if (!pl.at("coords").is_array()) invalid("coords must be an array");
        for (const auto& c : pl.at("coords")) coords.push_back(get_elem(c, p, "coords"));
        g = T->element(coords);
    } else {
        g = get_mat(need(pl, "g"), p, 2 * n, "g");
        require_symplectic(V, g);
    }
    std::vector<std::string> methods = {"recursive"};
    if (pl.contains("methods")) {
        methods.clear();
        for (const auto& m : need(pl, "methods")) {
            if (!m.is_string()) invalid("methods must be strings");
            methods.push_back(m.get<std::string>());
        }
    }
    for (const auto& m : methods) {
        if (m != "recursive" && m != "semisimple" && m != "polarized" && m != "no-fixed-point")
            invalid("unknown method '" + m + "'");
        if (m == "semisimple" && !T) invalid("the semisimple method needs a torus");
    }
    std::optional<std::pair<FpMat, FpMat>> pol;
    if (pl.contains("polarization")) {
        const json& pj = pl.at("polarization");
        auto plus = get_int_rows(need(pj, "plus"), "polarization.plus");
        auto minus = get_int_rows(need(pj, "minus"), "polarization.minus");
        std::vector<Vec> a, b;
        for (const auto& r : plus) a.push_back(Vec(r.begin(), r.end()));
        for (const auto& r : minus) b.push_back(Vec(r.begin(), r.end()));
        pol = {from_columns(p, 2 * n, a), from_columns(p, 2 * n, b)};
    }
    const double tol = tol_of(s, o);
    return [=]() {
        Rows rows;
        cplx oracle = weil_operator(schrodinger_model(V), g).trace();
        for (const auto& m : methods) {
            cplx f;
            if (m == "recursive") {
                f = char_recursive(V, g);
            } else if (m == "semisimple") {
                f = coords.empty() ? char_semisimple(*T, g).value : char_semisimple(*T, coords).value;
            } else if (m == "no-fixed-point") {
                f = cplx(char_no_fixed_point(V, g, some_maximal_invariant_isotropic(V, g)), 0);
            } else {
                std::optional<std::pair<FpMat, FpMat>> use = pol;
                if (!use) {
                    auto iso = maximal_invariant_isotropics(V, g);
                    for (size_t i = 0; i < iso.size() && !use; ++i)
                        for (size_t j = 0; j < iso.size() && !use; ++j)
                            if (iso[i].cols == n && iso[j].cols == n && rank(hcat(iso[i], iso[j])) == 2 * n)
                                use = std::make_pair(iso[i], iso[j]);
                }
                if (!use) {
                    rows.push_back(error_row("", "polarized formula vs oracle", "no g-invariant polarization"));
                    continue;
                }
                f = char_polarized(V, g, use->first, use->second);
            }
            ReportRow r = compare_row("", m + " formula vs oracle trace", f, oracle, tol);
            rows.push_back(r);
        }
        return rows;
    };
}

Job twisted_job(const Scenario& s, const RunOptions& o) {
    const json& pl = s.payload;
    const int p = get_prime(pl), n = get_int(pl, "n", 1);
    std::vector<std::vector<int>> groups;
    for (const auto& g : need(pl, "groups")) groups.push_back(get_perm(g, "groups"));
    std::vector<FpMat> maps;
    for (const auto& m : need(pl, "maps")) maps.push_back(get_mat(m, p, 2 * n, "maps"));
    BlockTwist bt = make_block_twist(p, n, groups, maps);
    validate(bt);
    const int nb = static_cast<int>(maps.size());
    std::vector<FpMat> elements;
    const json& ej = need(pl, "elements");
    if (ej.is_string()) {
        if (ej.get<std::string>() != "torus" || n != 1) invalid("elements must be a list or \"torus\" with n = 1");
        SympSpace S = standard_space(p, 1);
        std::vector<FpMat> tor;
        std::set<FpMat> seen;
        for (const auto& d : sp2_tori()) {
            Torus T = build_torus(d, S);
            for (const auto& pt : T.points())
                if (seen.insert(T.element(pt)).second) tor.push_back(T.element(pt));
        }
        std::vector<size_t> idx(nb, 0);
        while (true) {
            std::vector<FpMat> parts;
            for (size_t i : idx) parts.push_back(tor[i]);
            elements.push_back(block_diag(parts));
            int b = 0;
            while (b < nb && ++idx[b] == tor.size()) idx[b++] = 0;
            if (b == nb) break;
        }
    } else {
        for (const auto& e : ej) {
            std::vector<FpMat> parts;
            for (const auto& m : e) parts.push_back(get_mat(m, p, 2 * n, "elements"));
            if (static_cast<int>(parts.size()) != nb) invalid("each element lists one matrix per block");
            elements.push_back(block_diag(parts));
        }
    }
    const double tol = tol_of(s, o);
    return [=] {
        WorstCase prod(tol), resid(1e-9), split(tol);
        for (const auto& g : elements) {
            auto t = twisted_trace(bt, g);
            auto f = twisted_trace(bt, g, ScalarSplit::First, false);
            prod.add(t.product, t.direct);
            resid.add(t.normalization_residual, 0);
            split.add(f.product, t.product);
        }
        return Rows{prod.row("", "product formula vs direct twisted trace"),
                    resid.row("", "composite intertwiner vs omega, residual"),
                    split.row("", "scalar split first vs even")};
    };
}

Job sign_block_job(const Scenario& s, const RunOptions& o) {
    OrbitScenario sc = get_orbit_scenario(s.payload);
    validate(sc);
    std::optional<int> expected;
    if (s.payload.contains("expected_sign")) {
        expected = get_int(s.payload, "expected_sign");
        if (*expected != 1 && *expected != -1) invalid("expected_sign must be 1 or -1");
    }
    const double tol = tol_of(s, o);
    const bool fault = o.fault_sgn;
    return [=] {
        Rows rows;
        cplx oracle = block_oracle(sc);
        BlockSign b = block_sign_formula(sc);
        cplx f = fault ? -b.value() : b.value();
        ReportRow r = compare_row("", "block_sign_formula x fixed factor vs oracle trace", f, oracle, tol);
        r.source = sign_source_name(b.source);
        rows.push_back(r);
        if (sc.classification == Branch::AsymSymUr || sc.classification == Branch::SymUrSymUr) {
            BlockSign t = block_sign_torus(sc);
            ReportRow tr = compare_row("", "torus algorithm vs oracle trace", fault ? -t.value() : t.value(), oracle, tol);
            tr.source = sign_source_name(t.source);
            std::string trace;
            for (const auto& x : t.cover.trace) trace += (trace.empty() ? "" : "; ") + x;
            tr.note = "cover " + t.cover.desc().str() + ": " + trace;
            rows.push_back(tr);
        }
        if (expected) {
            ReportRow e = exact_row("", "sign vs expected_sign", fault ? -b.sign : b.sign, *expected);
            e.source = sign_source_name(b.source);
            rows.push_back(e);
        }
        return rows;
    };
}

Job assemble_job(const Scenario& s, const RunOptions& o) {
    const json& pl = s.payload;
    AssembleInput in;
    in.action = get_action(need(pl, "action"));
    validate(in.action);
    for (const auto& j : need(pl, "scenarios")) {
        OrbitScenario sc = get_orbit_scenario(j);
        if (sc.alpha < 0) invalid("assembly scenarios need alpha");
        validate(sc);
        in.scenarios.push_back(sc);
    }
    const int p = get_prime(pl);
    for (const auto& j : need(pl, "s_values"))
        in.s_values.push_back({get_int(j, "root"), get_elem(need(j, "value"), p, "s_values.value")});
    const bool factored = get_bool(pl, "factored", true);
    cplx vartheta(1, 0);
    if (pl.contains("vartheta")) {
        const json& v = pl.at("vartheta");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            invalid("vartheta must be [re, im]");
        vartheta = cplx(v[0].get<double>(), v[1].get<double>());
    }
    const double tol = tol_of(s, o);
    const bool fault = o.fault_sgn;
    return [=] {
        Rows rows;
        Assembled a = assemble_product(in, factored);
        FullTwist ft = full_twist(in);
        TwistedTrace t = twisted_trace(ft.twist, ft.s_action);
        cplx f = factored ? theta_rho(a, cplx(1, 0)) : a.unfactored;
        if (fault) f = -f;
        if (factored) rows.push_back(compare_row("", "factored vs unfactored product", a.factored, a.unfactored, tol));
        rows.push_back(compare_row("", factored ? "theta_rho vs direct twisted trace" : "product vs direct twisted trace",
                                   f, t.direct, tol));
        rows.push_back(compare_row("", "composite intertwiner vs omega, residual", t.normalization_residual, 0, 1e-9));
        if (factored) {
            ReportRow r = compare_row("", "|theta_rho(vartheta)| / |theta_rho(1)| vs 1",
                                      std::abs(theta_rho(a, vartheta)) / std::max(1e-300, std::abs(theta_rho(a, 1))), 1,
                                      tol);
            rows.push_back(r);
        }
        return rows;
    };
}

std::set<std::set<int>> theta_orbits(const RootDatum& d) {
    std::set<std::set<int>> orbits;
    for (const auto& a : d.roots) {
        std::set<int> o;
        IVec cur = a;
        do {
            o.insert(root_index(d, cur));
            cur = imat_apply(d.theta, cur);
        } while (cur != a);
        orbits.insert(o);
    }
    return orbits;
}

Job root_datum_job(const Scenario& s, const RunOptions&) {
    RootDatum d = get_root_datum(s.payload);
    validate(d);
    return [=] {
        Restriction r = restrict_roots(d);
        Rows rows;
        rows.push_back(exact_row("", "restricted roots vs Theta-orbits of roots", static_cast<long long>(r.res.size()),
                                 static_cast<long long>(theta_orbits(d).size())));
        bool nontype1 = false;
        for (const auto& rr : r.res) nontype1 |= rr.type != 1;
        rows.push_back(exact_row("", "type 2/3 roots present vs moved A_{2n} component", nontype1, has_moved_A_even(d)));
        const int l = int_matrix_order(d.theta);
        bool ok = true;
        for (long long t : pi0_torsion(d.theta))
            for (long long q = 2; q <= t; ++q)
                if (t % q == 0 && is_prime(q) && l % q) ok = false;
        rows.push_back(exact_row("", "primes of the torsion of coker(1 - theta) divide the order", ok, 1));
        return rows;
    };
}

Job lattice_job(const Scenario& s, const RunOptions&) {
    auto rows_in = get_int_rows(need(s.payload, "matrix"), "matrix");
    if (rows_in.empty() || rows_in.front().empty()) invalid("matrix must be nonempty");
    IMat M;
    for (const auto& r : rows_in) M.push_back(IVec(r.begin(), r.end()));
    const bool finite = get_bool(s.payload, "finite_order", false);
    if (finite && M.size() != M.front().size()) invalid("a finite-order matrix must be square");
    return [=] {
        Rows rows;
        SNF snf = smith_normal_form(M);
        rows.push_back(exact_row("", "U M V = D", big_mul(big_mul(snf.U, to_big(M)), snf.V) == snf.D, 1));
        rows.push_back(exact_row("", "|det U| = |det V| = 1", abs(big_det(snf.U)) == 1 && abs(big_det(snf.V)) == 1, 1));
        if (finite) {
            const int l = int_matrix_order(M);
            bool ok = true;
            for (long long t : pi0_torsion(M))
                for (long long q = 2; q <= t; ++q)
                    if (t % q == 0 && is_prime(q) && l % q) ok = false;
            rows.push_back(exact_row("", "primes of the torsion of coker(1 - theta) divide the order", ok, 1));
        }
        return rows;
    };
}

Job compile(const Scenario& s, const RunOptions& o) {
    try {
        if (s.kind == "weil-verify") return weil_verify(s, o);
        if (s.kind == "gerardin") return gerardin_job(s, o);
        if (s.kind == "twisted-trace") return twisted_job(s, o);
        if (s.kind == "sign-block") return sign_block_job(s, o);
        if (s.kind == "assemble") return assemble_job(s, o);
        if (s.kind == "root-datum") return root_datum_job(s, o);
        if (s.kind == "lattice-check") return lattice_job(s, o);
        invalid("unknown kind '" + s.kind + "'");
    } catch (const Error& e) {
        if (e.code() == Errc::ValidationError) throw Error(Errc::ValidationError, "scenario '" + s.id + "': " + e.what());
        throw Error(Errc::ValidationError, "scenario '" + s.id + "': " + e.what());
    } catch (const json::exception& e) {
        throw Error(Errc::ValidationError, "scenario '" + s.id + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(Errc::ValidationError, "scenario '" + s.id + "': " + e.what());
    }
}

}  // namespace

const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> kinds = {"weil-verify", "gerardin",   "twisted-trace", "sign-block",
                                                   "assemble",    "root-datum", "lattice-check"};
    return kinds;
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("scenarios") || !doc.at("scenarios").is_array())
        invalid("the document must be an object with a \"scenarios\" array");
    std::vector<Scenario> out;
    std::set<std::string> ids;
    for (const auto& j : doc.at("scenarios")) {
        Scenario s;
        s.id = get_string(j, "id");
        s.kind = get_string(j, "kind");
        const auto& kinds = scenario_kinds();
        if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
            invalid("scenario '" + s.id + "': unknown kind '" + s.kind + "'");
        if (!ids.insert(s.id).second) invalid("duplicate scenario id '" + s.id + "'");
        if (j.contains("tolerance")) {
            if (!j.at("tolerance").is_number() || j.at("tolerance").get<double>() < 0)
                invalid("scenario '" + s.id + "': tolerance must be a nonnegative number");
            s.tolerance = j.at("tolerance").get<double>();
        }
        s.payload = need(j, "payload");
        if (!s.payload.is_object()) invalid("scenario '" + s.id + "': payload must be an object");
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenarios(ss.str());
}

Report run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& opts) {
    std::vector<Job> jobs;
    for (const auto& s : scenarios) jobs.push_back(compile(s, opts));
    std::vector<Rows> results(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < jobs.size(); i = next++) {
            auto t0 = std::chrono::steady_clock::now();
            Rows rows;
            try {
                rows = jobs[i]();
            } catch (const std::exception& e) {
                rows = {error_row("", "scenario raised", e.what())};
            }
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            for (auto& r : rows) {
                r.scenario = scenarios[i].id;
                r.seed = opts.seed;
                r.timing_ms = ms;
            }
            results[i] = std::move(rows);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::max(1, std::min<int>(opts.jobs, static_cast<int>(jobs.size())));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    Report r;
    r.seed = opts.seed;
    for (auto& rows : results)
        for (auto& row : rows) r.rows.push_back(std::move(row));
    return r;
}

json describe_root_data(const std::vector<Scenario>& scenarios) {
    json out = json::array();
    for (const auto& s : scenarios) {
        if (s.kind != "root-datum") continue;
        RootDatum d;
        try {
            d = get_root_datum(s.payload);
            validate(d);
        } catch (const Error& e) {
            throw Error(Errc::ValidationError, "scenario '" + s.id + "': " + e.what());
        }
        Restriction r = restrict_roots(d);
        json res = json::array();
        for (const auto& rr : r.res) res.push_back({{"vector", rr.vec}, {"type", rr.type}, {"preimages", rr.orbit}});
        out.push_back({{"id", s.id},
                       {"name", d.name},
                       {"rank", d.rank},
                       {"roots", d.roots.size()},
                       {"theta_order", int_matrix_order(d.theta)},
                       {"pi0_torsion", pi0_torsion(d.theta)},
                       {"projection", r.projection},
                       {"restricted_roots", res},
                       {"moved_A_even", has_moved_A_even(d)}});
    }
    return out;
}

json tabulate_ramified(const std::vector<int>& primes, int max_degree) {
    constexpr long long kOracleCap = 625;
    json rows = json::array();
    auto refuse = [&](int p, const std::string& what, const std::string& why) {
        rows.push_back({{"p", p}, {"config", what}, {"refused", why}, {"source", "cap"}});
    };
    for (int p : primes) {
        if (p < 3 || !is_prime(p)) {
            refuse(p, "", "p must be an odd prime");
            continue;
        }
        for (int D = 1; D <= max_degree; ++D)
            if (ipow(p, D) > kMaxFieldOrder) {
                refuse(p, "deg_alpha=" + std::to_string(D),
                       "field of order " + std::to_string(p) + "^" + std::to_string(D) + " exceeds the cap " +
                           std::to_string(kMaxFieldOrder));
                break;
            }
        for (const auto& c : scenario_configs({p}, max_degree)) {
            if (!is_ramified(c.branch)) continue;
            const long long dimW = ipow(p, is_symmetric(c.branch) ? c.deg_alpha / 2 : c.deg_alpha);
            if (dimW > kOracleCap) {
                refuse(p, c.str(),
                       "Weil representation of dimension " + std::to_string(dimW) + " exceeds the oracle cap " +
                           std::to_string(kOracleCap));
                continue;
            }
            std::vector<std::pair<std::string, int>> vals;
            for (const auto& C : admissible_C(c)) vals.push_back({C.str(), ramified_constant(scenarios_for(c, C).front())});
            bool uniform = std::all_of(vals.begin(), vals.end(), [&](const auto& v) { return v.second == vals[0].second; });
            json base = {{"p", p},
                         {"branch", branch_name(c.branch)},
                         {"deg_alpha", c.deg_alpha},
                         {"deg_pm_alpha", c.deg_pm_alpha},
                         {"deg_res", c.deg_res},
                         {"deg_pm_res", c.deg_pm_res},
                         {"sigma_exp", c.sigma_exp},
                         {"config", c.str()},
                         {"source", sign_source_name(SignSource::OracleConstant)}};
            if (uniform) {
                json r = base;
                r["C"] = "all " + std::to_string(vals.size()) + " admissible";
                r["constant"] = vals[0].second;
                rows.push_back(r);
            } else {
                for (const auto& [C, v] : vals) {
                    json r = base;
                    r["C"] = C;
                    r["constant"] = v;
                    rows.push_back(r);
                }
            }
        }
    }
    return {{"rows", rows}};
}

std::string ramified_table_csv(const json& table) {
    std::ostringstream os;
    os << "p,config,C,constant,source,refused\n";
    for (const auto& r : table.at("rows")) {
        auto field = [&](const char* k) -> std::string {
            if (!r.contains(k)) return "";
            const json& v = r.at(k);
            std::string s = v.is_string() ? v.get<std::string>() : v.dump();
            if (s.find_first_of(",\"") != std::string::npos) {
                std::string q = "\"";
                for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
                s = q + "\"";
            }
            return s;
        };
        os << field("p") << ',' << field("config") << ',' << field("C") << ',' << field("constant") << ','
           << field("source") << ',' << field("refused") << "\n";
    }
    return os.str();
}

}  // namespace wc
