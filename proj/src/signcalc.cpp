#include "weilchar/signcalc.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>

namespace wc {

// ---------------------------------------------------------------------------
// Orbits

namespace {

bool is_perm(const Perm& p, int n) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> hit(n, false);
    for (int x : p) {
        if (x < 0 || x >= n || hit[x]) return false;
        hit[x] = true;
    }
    return true;
}

Perm compose(const Perm& a, const Perm& b) {  // a after b
    Perm r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
    return r;
}

bool commute(const Perm& a, const Perm& b) { return compose(a, b) == compose(b, a); }

std::vector<Perm> group_closure(int n, const std::vector<Perm>& gens) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0);
    std::set<Perm> seen = {id};
    std::vector<Perm> out = {id};
    for (size_t i = 0; i < out.size(); ++i)
        for (const auto& g : gens) {
            Perm h = compose(g, out[i]);
            if (seen.insert(h).second) out.push_back(h);
        }
    return out;
}

std::set<int> gamma_orbit_of(const std::vector<Perm>& G, int a) {
    std::set<int> o;
    for (const auto& g : G) o.insert(g[a]);
    return o;
}

}  // namespace

void validate(const OrbitAction& a) {
    const int n = a.size;
    if (n <= 0) throw Error(Errc::InvalidAction, "empty root set");
    if (!is_perm(a.neg, n) || !is_perm(a.theta, n)) throw Error(Errc::InvalidAction, "neg and theta must be permutations");
    for (const auto& g : a.gamma_gens)
        if (!is_perm(g, n)) throw Error(Errc::InvalidAction, "gamma generator is not a permutation");
    for (int i = 0; i < n; ++i)
        if (a.neg[i] == i || a.neg[a.neg[i]] != i) throw Error(Errc::InvalidAction, "neg must be a fixed-point-free involution");
    if (!commute(a.neg, a.theta)) throw Error(Errc::InvalidAction, "neg and theta do not commute");
    for (const auto& g : a.gamma_gens)
        if (!commute(g, a.neg) || !commute(g, a.theta)) throw Error(Errc::InvalidAction, "gamma does not commute with neg or theta");
    auto G = group_closure(n, a.gamma_gens);
    for (int i = 0; i < n; ++i) {
        bool si = gamma_orbit_of(G, i).count(a.neg[i]) > 0;
        bool st = gamma_orbit_of(G, a.theta[i]).count(a.neg[a.theta[i]]) > 0;
        if (si != st) throw Error(Errc::InvalidAction, "theta does not preserve symmetry");
    }
}

OrbitClassification classify_orbits(const OrbitAction& a) {
    validate(a);
    const int n = a.size;
    OrbitClassification out;
    out.gamma = group_closure(n, a.gamma_gens);
    out.roots.resize(n);
    std::vector<int> gid(n, -1), sid(n, -1), bid(n, -1);
    for (int i = 0; i < n; ++i) {
        if (gid[i] >= 0) continue;
        for (int j : gamma_orbit_of(out.gamma, i)) gid[j] = out.n_gamma_orbits;
        ++out.n_gamma_orbits;
    }
    for (int i = 0; i < n; ++i) {
        if (sid[i] >= 0) continue;
        for (int j : gamma_orbit_of(out.gamma, i)) sid[j] = out.n_sigma_orbits;
        for (int j : gamma_orbit_of(out.gamma, a.neg[i])) sid[j] = out.n_sigma_orbits;
        ++out.n_sigma_orbits;
    }
    for (int i = 0; i < n; ++i) {
        RootInfo& r = out.roots[i];
        r.gamma_orbit = gid[i];
        r.sigma_orbit = sid[i];
        r.symmetric = gid[a.neg[i]] == gid[i];
        std::vector<int> orbit = {i};
        for (int x = a.theta[i]; x != i; x = a.theta[x]) orbit.push_back(x);
        r.l = static_cast<int>(orbit.size());
        r.m = 1;
        while (sid[orbit[r.m % r.l]] != sid[i]) ++r.m;
        const int tm = orbit[r.m % r.l];
        r.sign = (r.symmetric || gid[tm] == gid[i]) ? 1 : -1;
        r.res_symmetric = false;
        for (int x : orbit)
            if (gid[a.neg[x]] == gid[i]) r.res_symmetric = true;
    }
    for (int i = 0; i < n; ++i) {
        if (bid[i] >= 0) continue;
        const int b = static_cast<int>(out.block_reps.size());
        out.block_reps.push_back(i);
        for (int x = i, k = 0; k < out.roots[i].l; ++k, x = a.theta[x])
            for (int j = 0; j < n; ++j)
                if (sid[j] == sid[x]) bid[j] = b;
    }
    for (int i = 0; i < n; ++i) out.roots[i].block = bid[i];
    return out;
}

// ---------------------------------------------------------------------------
// Scenarios

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::AsymAsym: return "asym/asym";
        case Branch::AsymSymUr: return "asym/sym-ur";
        case Branch::AsymSymRam: return "asym/sym-ram";
        case Branch::SymUrSymUr: return "sym-ur/sym-ur";
        case Branch::SymUrSymRam: return "sym-ur/sym-ram";
    }
    return "?";
}

Branch parse_branch(const std::string& s) {
    for (Branch b : {Branch::AsymAsym, Branch::AsymSymUr, Branch::AsymSymRam, Branch::SymUrSymUr, Branch::SymUrSymRam})
        if (s == branch_name(b)) return b;
    throw Error(Errc::ValidationError, "unknown classification '" + s + "'");
}

bool is_symmetric(Branch b) { return b == Branch::SymUrSymUr || b == Branch::SymUrSymRam; }
bool is_ramified(Branch b) { return b == Branch::AsymSymRam || b == Branch::SymUrSymRam; }

int OrbitScenario::varsigma_exp() const { return (deg_alpha - sigma_exp % deg_alpha) % deg_alpha; }

namespace {

void need(bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::InconsistentDegrees, what);
}

RestrictedType expected_restricted(Branch b) {
    switch (b) {
        case Branch::AsymAsym: return RestrictedType::Asymmetric;
        case Branch::AsymSymUr:
        case Branch::SymUrSymUr: return RestrictedType::SymUnramified;
        default: return RestrictedType::SymRamified;
    }
}

FieldElem frob_to(const FieldElem& x, int e) { return x.frob(e); }

int fp_trace(const FieldElem& x) { return trace_to(x, gf(x.p(), 1)).v; }

}  // namespace

RestrictedType classify_restricted(const OrbitScenario& sc) {
    const int D = sc.deg_alpha, Dpm = sc.deg_pm_alpha, R = sc.deg_res, Rpm = sc.deg_pm_res;
    need(D >= 1 && Dpm >= 1 && R >= 1 && Rpm >= 1, "degrees must be positive");
    need(D % R == 0 && R % Rpm == 0 && D % Dpm == 0, "degrees do not form a tower");
    if (!is_symmetric(sc.classification)) {
        need(D == Dpm, "asymmetric alpha needs k_alpha = k_{+-alpha}");
        if (sc.classification == Branch::AsymAsym) {
            need(R == Rpm, "asymmetric alpha_res needs k_res = k_{+-res}");
            return RestrictedType::Asymmetric;
        }
        const int n = D / Rpm;
        if (n % 2 == 0) {
            need(R == 2 * Rpm, "unramified alpha_res needs [k_res : k_{+-res}] = 2");
            return RestrictedType::SymUnramified;
        }
        need(R == Rpm, "ramified alpha_res needs k_res = k_{+-res}");
        return RestrictedType::SymRamified;
    }
    if (D == Dpm) {
        need(R == Rpm, "ramified alpha_res needs k_res = k_{+-res}");
        return RestrictedType::SymRamified;
    }
    need(D == 2 * Dpm, "symmetric alpha needs [k_alpha : k_{+-alpha}] <= 2");
    const int f = D / R;
    if (f % 2 == 1) {
        need(R == 2 * Rpm, "unramified alpha_res needs [k_res : k_{+-res}] = 2");
        need(std::gcd(R, Dpm) == Rpm, "k_res and k_{+-alpha} must meet in k_{+-res}");
        return RestrictedType::SymUnramified;
    }
    need(R == Rpm, "ramified alpha_res needs k_res = k_{+-res}");
    need(Dpm % R == 0, "k_{+-alpha} must contain k_res");
    return RestrictedType::SymRamified;
}

FieldElem symmetric_constraint_target(const OrbitScenario& sc) {
    return frob_to(sc.C, sc.varsigma_exp()) / sc.C;
}

FieldElem forced_eta_alpha(const OrbitScenario& sc) {
    FieldElem t = frob_to(sc.C, sc.varsigma_exp()) / sc.C;
    if (sc.classification != Branch::AsymAsym) t = -t;
    return t / sc.eta_minus_alpha;
}

void validate(const OrbitScenario& sc) {
    if (!is_prime(sc.p) || sc.p == 2) throw Error(Errc::NotPrime, "p must be an odd prime");
    RestrictedType rt = classify_restricted(sc);
    if (is_symmetric(sc.classification) && sc.deg_alpha == sc.deg_pm_alpha)
        throw Error(Errc::FormDegenerate, "a symmetric ramified root carries no admissible form");
    need(rt == expected_restricted(sc.classification),
         std::string("degrees do not match the classification ") + branch_name(sc.classification));
    need(sc.m >= 1 && sc.l >= 1 && sc.l % sc.m == 0, "m must divide l");
    const int f = sc.f();
    need(f % sc.p != 0, "f must be prime to p");
    const int base = is_symmetric(sc.classification) || sc.classification == Branch::AsymAsym ? sc.deg_res : sc.deg_pm_res;
    need((sc.l / sc.m) % (sc.deg_alpha / base) == 0, "the residue degree must divide l/m");
    const int se = ((sc.sigma_exp % sc.deg_alpha) + sc.deg_alpha) % sc.deg_alpha;
    need(se % base == 0 && std::gcd(se / base, sc.deg_alpha / base) == 1,
         "sigma must generate the Galois group over its base field");
    FieldDesc k = sc.k_alpha();
    auto in_k = [&](const FieldElem& x, const char* name) {
        if (x.F != k) throw Error(Errc::ValidationError, std::string(name) + " must lie in k_alpha");
        if (x.is_zero()) throw Error(Errc::ZeroElement, std::string(name) + " must be nonzero");
    };
    in_k(sc.C, "C");
    in_k(sc.eta_alpha, "eta_alpha");
    if (is_symmetric(sc.classification)) {
        if (frob_to(sc.C, sc.tau_exp()) != -sc.C) throw Error(Errc::FormDegenerate, "tau(C) != -C");
        if (sc.eta_alpha * frob_to(sc.eta_alpha, sc.tau_exp()) != symmetric_constraint_target(sc))
            throw Error(Errc::ConstraintViolated, "eta_alpha tau(eta_alpha) != varsigma(C)/C");
    } else {
        in_k(sc.eta_minus_alpha, "eta_minus_alpha");
        if (sc.eta_alpha != forced_eta_alpha(sc))
            throw Error(Errc::ConstraintViolated, sc.classification == Branch::AsymAsym
                                                      ? "eta_alpha eta_{-alpha} != varsigma(C)/C"
                                                      : "eta_alpha eta_{-alpha} != -varsigma(C)/C");
    }
}

BuiltBlock build_block_unchecked(const OrbitScenario& sc) {
    FieldDesc k = sc.k_alpha();
    const int D = k->degree(), p = sc.p;
    std::vector<FieldElem> b;
    for (int i = 0, code = 1; i < D; ++i, code *= p) b.emplace_back(k, code);
    const int vs = sc.varsigma_exp();
    BuiltBlock out;
    if (is_symmetric(sc.classification)) {
        FpMat G(p, D, D);
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) G(i, j) = fp_trace(sc.C * b[i] * frob_to(b[j], sc.tau_exp()));
        out.space.p = p;
        out.space.dim = D;
        out.space.gram = G;
        out.g = semilinear_matrix(sc.eta_alpha, vs);
        return out;
    }
    FpMat G(p, 2 * D, 2 * D);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            int t = fp_trace(sc.C * b[i] * b[j]);
            G(i, D + j) = t;
            G(D + i, j) = mod_p(-t, p);
        }
    out.space.p = p;
    out.space.dim = 2 * D;
    out.space.gram = G;
    FpMat A = semilinear_matrix(sc.eta_alpha, vs), B = semilinear_matrix(sc.eta_minus_alpha, vs);
    FpMat g(p, 2 * D, 2 * D);
    const bool swap = sc.classification != Branch::AsymAsym;
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            if (swap) {
                g(i, D + j) = A(i, j);
                g(D + i, j) = B(i, j);
            } else {
                g(i, j) = A(i, j);
                g(D + i, D + j) = B(i, j);
            }
        }
    out.g = g;
    return out;
}

BuiltBlock build_block(const OrbitScenario& sc) {
    validate(sc);
    BuiltBlock out = build_block_unchecked(sc);
    if (det(out.space.gram) == 0) throw Error(Errc::FormDegenerate, "block form is degenerate");
    if (!is_symplectic(out.space, out.g)) throw Error(Errc::ConstraintViolated, "[eta]^m does not preserve the block form");
    return out;
}

// ---------------------------------------------------------------------------
// Tori

TorusDesc TorusCover::desc() const {
    TorusDesc d;
    for (const auto& pc : pieces)
        d.factors.push_back(TorusFactor{pc.split, pc.split ? pc.field->degree() : pc.field->degree() / 2});
    return d;
}

std::vector<FieldElem> TorusCover::coords() const {
    std::vector<FieldElem> c;
    for (const auto& pc : pieces) c.push_back(pc.x);
    return c;
}

int TorusCover::sign() const {
    int l = 0, chi = 1;
    for (const auto& pc : pieces) {
        if (!pc.x.is_one()) l += pc.split ? 2 : 1;
        chi *= pc.split ? sgn_mult(pc.x) : sgn_norm_one(pc.x, half_field(pc.field));
    }
    return (l % 2 ? -1 : 1) * chi;
}

std::vector<TorusPiece> factor_binomial(const FieldElem& beta, int f, bool split) {
    const int p = beta.p(), d = beta.F->degree();
    for (int j = 1; ipow(p, d * j) <= kMaxFieldOrder; ++j) {
        FieldDesc L = gf(p, d * j);
        auto roots = nth_roots(embed(beta, L), f);
        if (static_cast<int>(roots.size()) != f) continue;
        std::vector<TorusPiece> out;
        std::set<int> used;
        for (const auto& x : roots) {
            if (used.count(x.v)) continue;
            int o = 0;
            FieldElem y = x;
            do {
                used.insert(y.v);
                y = y.frob(d);
                ++o;
            } while (y != x);
            FieldDesc ki = gf(p, d * o);
            out.push_back(TorusPiece{ki, restrict_to(x, ki), split});
        }
        return out;
    }
    throw Error(Errc::CapExceeded, "X^f - beta does not split below the field cap");
}

namespace {

FieldElem some_square_root(const FieldElem& x) {
    auto r = nth_roots(x, 2);
    if (r.empty()) throw Error(Errc::NormConditionViolated, x.str() + " has no square root in its field");
    return r.front();
}

void pair_cover(const FieldElem& b, int f, FieldDesc kpm, TorusCover& out) {
    FieldElem nb = norm_to(b, kpm);
    if (nb == -FieldElem::one(kpm)) {
        out.trace.push_back("case1 f=" + std::to_string(f));
        for (auto& pc : factor_binomial(b, f, true)) out.pieces.push_back(pc);
        return;
    }
    if (!nb.is_one()) throw Error(Errc::NormConditionViolated, "Nr(beta) is not +-1");
    if (f % 2 == 1) {
        out.trace.push_back("case2 f=" + std::to_string(f));
        for (auto& pc : factor_binomial(b, f, false)) out.pieces.push_back(pc);
        for (auto& pc : factor_binomial(-b, f, false)) out.pieces.push_back(pc);
        return;
    }
    out.trace.push_back("case3 f=" + std::to_string(f));
    pair_cover(some_square_root(b), f / 2, kpm, out);
    pair_cover(some_square_root(-b), f / 2, kpm, out);
}

}  // namespace

TorusCover torus_algorithm(const FieldElem& beta, int f, FieldDesc k_pm_res, TorusBranch branch) {
    if (f <= 0 || f % beta.p() == 0) throw Error(Errc::NotCoprimeToP, "f must be prime to p");
    if (beta.F->degree() != 2 * k_pm_res->degree())
        throw Error(Errc::InconsistentDegrees, "k_res must be quadratic over k_{+-res}");
    TorusCover out;
    if (branch == TorusBranch::AsymSym) {
        pair_cover(beta, f, k_pm_res, out);
    } else {
        if (f % 2 == 0) throw Error(Errc::InconsistentDegrees, "unramified symmetric restriction needs odd f");
        if (!norm_to(beta, k_pm_res).is_one()) throw Error(Errc::NormConditionViolated, "beta is not norm-one");
        out.trace.push_back("sym f=" + std::to_string(f));
        out.pieces = factor_binomial(beta, f, false);
    }
    for (const auto& pc : out.pieces)
        if (!pc.split && !norm_to(pc.x, half_field(pc.field)).is_one())
            throw Error(Errc::NormConditionViolated, "root " + pc.x.str() + " is not norm-one in its field");
    return out;
}

// ---------------------------------------------------------------------------
// Signs

const char* sign_source_name(SignSource s) {
    switch (s) {
        case SignSource::ClosedForm: return "closed-form";
        case SignSource::TorusAlgorithm: return "torus-algorithm";
        case SignSource::OracleConstant: return "oracle-computed";
    }
    return "?";
}

int epsilon_root(bool symmetric, const FieldElem& x) {
    return symmetric ? sgn_norm_one(x, half_field(x.F)) : sgn_mult(x);
}

namespace {

void fill_fixed(const OrbitScenario& sc, const BuiltBlock& B, BlockSign& s) {
    s.dim_fixed = fixed_space(B.g).cols;
    s.fixed_factor = std::pow(static_cast<double>(sc.p), s.dim_fixed / 2.0);
}

std::mutex g_cache_mutex;
std::map<RamifiedKey, int> g_cache;

RamifiedKey key_of(const OrbitScenario& sc) {
    return RamifiedKey{sc.p,      sc.deg_alpha, sc.deg_pm_alpha, sc.deg_res, sc.deg_pm_res,
                       ((sc.sigma_exp % sc.deg_alpha) + sc.deg_alpha) % sc.deg_alpha, sc.C.v, sc.classification};
}

}  // namespace

cplx block_oracle(const OrbitScenario& sc) {
    BuiltBlock B = build_block(sc);
    return weil_operator(schrodinger_model(B.space), B.g).trace();
}

int ramified_constant(const OrbitScenario& sc) {
    if (!is_ramified(sc.classification)) throw Error(Errc::UnsupportedBranch, "not a ramified branch");
    RamifiedKey key = key_of(sc);
    {
        std::lock_guard<std::mutex> lk(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    cplx v = block_oracle(sc);
    const int s = v.real() >= 0 ? 1 : -1;
    if (std::abs(v - cplx(s, 0)) > 1e-8) throw Error(Errc::ToleranceExceeded, "ramified block trace is not a sign");
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    auto [it, inserted] = g_cache.emplace(key, s);
    if (!inserted && it->second != s) throw Error(Errc::InconsistentEvaluation, "ramified constant changed");
    return it->second;
}

std::map<RamifiedKey, int> ramified_cache_snapshot() {
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    return g_cache;
}

void clear_ramified_cache() {
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    g_cache.clear();
}

BlockSign block_sign_torus(const OrbitScenario& sc) {
    BuiltBlock B = build_block(sc);
    BlockSign s;
    fill_fixed(sc, B, s);
    s.source = SignSource::TorusAlgorithm;
    FieldDesc kres = sc.k_res();
    if (sc.classification == Branch::AsymSymUr) {
        FieldElem w = sc.eta_minus_alpha * sc.C;
        FieldElem gamma = frob_to(w, sc.varsigma_exp()) / w;
        FieldElem delta = norm_to(-gamma, kres);
        s.cover = torus_algorithm(some_square_root(delta), sc.f(), sc.k_pm_res(), TorusBranch::AsymSym);
    } else if (sc.classification == Branch::SymUrSymUr) {
        s.cover = torus_algorithm(norm_to(sc.eta_alpha, kres), sc.f(), sc.k_pm_res(), TorusBranch::SymSym);
    } else {
        throw Error(Errc::UnsupportedBranch, std::string("no torus algorithm for ") + branch_name(sc.classification));
    }
    int normone = 0, chi = 1;
    for (const auto& pc : s.cover.pieces) {
        if (!pc.split) ++normone;
        chi *= pc.split ? sgn_mult(pc.x) : sgn_norm_one(pc.x, half_field(pc.field));
    }
    const int n = s.dim_fixed > 0 ? 1 : 0;
    s.sign = ((normone - n) % 2 ? -1 : 1) * chi;
    return s;
}

BlockSign block_sign_formula(const OrbitScenario& sc) {
    BuiltBlock B = build_block(sc);
    BlockSign s;
    fill_fixed(sc, B, s);
    const int n = s.dim_fixed > 0 ? 1 : 0;
    switch (sc.classification) {
        case Branch::AsymAsym: {
            const int e = sc.g() * (sc.f() - 1);
            const int m1 = legendre_symbol(-1, sc.p);
            s.sign = (e % 2 ? m1 : 1) * sgn_mult(sc.eta_alpha);
            break;
        }
        case Branch::AsymSymUr:
            if (sc.f() != 1) return block_sign_torus(sc);
            s.sign = (n ? -1 : 1) * sgn_mult(sc.eta_minus_alpha * sc.C);
            break;
        case Branch::SymUrSymUr:
            if (sc.f() != 1) return block_sign_torus(sc);
            s.sign = (n ? 1 : -1) * sgn_norm_one(sc.eta_alpha, half_field(sc.k_alpha()));
            break;
        case Branch::AsymSymRam:
        case Branch::SymUrSymRam:
            s.sign = ramified_constant(sc);
            s.source = SignSource::OracleConstant;
            break;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

struct Prepared {
    OrbitClassification cls;
    std::vector<std::vector<FieldElem>> u;  // per scenario, alpha-values of theta^i(alpha)
};

Prepared prepare(const AssembleInput& in) {
    Prepared P;
    P.cls = classify_orbits(in.action);
    const size_t nb = P.cls.block_reps.size();
    std::vector<int> cover(nb, 0);
    std::map<int, FieldElem> sv;
    for (const auto& rv : in.s_values) {
        if (rv.root < 0 || rv.root >= in.action.size) throw Error(Errc::ValidationError, "s value for an unknown root");
        sv[rv.root] = rv.value;
    }
    for (const auto& sc : in.scenarios) {
        if (sc.alpha < 0 || sc.alpha >= in.action.size) throw Error(Errc::IncompleteScenarioCover, "scenario root out of range");
        const RootInfo& r = P.cls.roots[sc.alpha];
        ++cover[r.block];
        if (r.m != sc.m || r.l != sc.l) throw Error(Errc::InvalidAction, "m or l disagree with the orbit action");
        if (r.symmetric != is_symmetric(sc.classification))
            throw Error(Errc::InvalidAction, "symmetry of alpha disagrees with the orbit action");
        if (!r.symmetric) {
            const bool res_sym = sc.classification != Branch::AsymAsym;
            if (res_sym != r.res_symmetric || (r.sign < 0) != res_sym)
                throw Error(Errc::InvalidAction, "symmetry of alpha_res disagrees with the orbit action");
        }
        validate(sc);
        std::vector<FieldElem> us;
        for (int i = 0, x = sc.alpha; i < sc.m; ++i, x = in.action.theta[x]) {
            auto it = sv.find(x);
            if (it == sv.end()) throw Error(Errc::IncompleteScenarioCover, "missing s value for root " + std::to_string(x));
            if (it->second.F != sc.k_alpha() || it->second.is_zero())
                throw Error(Errc::ValidationError, "s value must be a unit of k_alpha");
            if (r.symmetric && !norm_to(it->second, half_field(sc.k_alpha())).is_one())
                throw Error(Errc::ConstraintViolated, "s value of a symmetric root must be norm-one");
            us.push_back(it->second);
        }
        P.u.push_back(us);
    }
    for (size_t b = 0; b < nb; ++b)
        if (cover[b] != 1) throw Error(Errc::IncompleteScenarioCover, "each orbit block needs exactly one scenario");
    return P;
}

int base_constant(const OrbitScenario& sc) {
    switch (sc.classification) {
        case Branch::AsymAsym: {
            const int e = sc.g() * (sc.f() - 1);
            return (e % 2 ? legendre_symbol(-1, sc.p) : 1) * sgn_mult(sc.eta_alpha);
        }
        case Branch::AsymSymUr: return sgn_mult(sc.eta_minus_alpha * sc.C);
        case Branch::SymUrSymUr: return -sgn_norm_one(sc.eta_alpha, half_field(sc.k_alpha()));
        default: return ramified_constant(sc);
    }
}

}  // namespace

Assembled assemble_product(const AssembleInput& in, bool factored) {
    Prepared P = prepare(in);
    Assembled out;
    out.unfactored = 1;
    bool all_f1 = true;
    for (size_t i = 0; i < in.scenarios.size(); ++i) {
        const OrbitScenario& base = in.scenarios[i];
        BlockReport br;
        br.alpha = base.alpha;
        br.branch = base.classification;
        br.twisted = base;
        FieldElem u = FieldElem::one(base.k_alpha());
        for (const auto& x : P.u[i]) u = u * x;
        br.twisted.eta_alpha = u * base.eta_alpha;
        if (!is_symmetric(base.classification)) br.twisted.eta_minus_alpha = u.inv() * base.eta_minus_alpha;
        br.sign = block_sign_formula(br.twisted);
        out.unfactored *= br.sign.value();
        if (base.f() != 1) all_f1 = false;
        if (!is_ramified(base.classification)) {
            br.base_constant = base_constant(base);
            for (const auto& x : P.u[i]) br.eps_s *= epsilon_root(is_symmetric(base.classification), x);
        } else {
            br.base_constant = ramified_constant(base);
        }
        out.blocks.push_back(br);
    }
    if (!factored) return out;
    if (!all_f1) throw Error(Errc::FRegimeViolated, "the factored form needs f_alpha = 1 for every block");
    out.factored_available = true;
    for (const auto& br : out.blocks) {
        out.c_eta *= br.base_constant;
        out.eps_tilde *= br.eps_s;
        out.v_eta_half *= br.sign.fixed_factor;
        const bool ur = br.branch == Branch::AsymSymUr || br.branch == Branch::SymUrSymUr;
        if (ur && br.sign.dim_fixed > 0) ++out.n_ur;
    }
    out.factored = cplx(out.c_eta * (out.n_ur % 2 ? -1 : 1) * out.eps_tilde * out.v_eta_half, 0.0);
    if (std::abs(out.factored - out.unfactored) > 1e-9)
        throw Error(Errc::InconsistentEvaluation, "factored and unfactored products disagree");
    return out;
}

cplx theta_rho(const Assembled& a, cplx vartheta_s) {
    if (std::abs(std::abs(vartheta_s) - 1.0) > 1e-9) throw Error(Errc::NotUnitModulus, "vartheta(s) must have modulus 1");
    if (!a.factored_available) throw Error(Errc::FRegimeViolated, "theta_rho needs the factored form");
    return a.factored * vartheta_s;
}

FullTwist full_twist(const AssembleInput& in) {
    Prepared P = prepare(in);
    std::vector<BuiltBlock> blocks;
    int total = 0;
    for (const auto& sc : in.scenarios) {
        blocks.push_back(build_block(sc));
        total += sc.m * blocks.back().space.dim;
    }
    const int p = in.scenarios.empty() ? 3 : in.scenarios.front().p;
    FullTwist out;
    SympSpace& V = out.twist.space;
    V.p = p;
    V.dim = total;
    V.gram = FpMat(p, total, total);
    out.twist.iota = FpMat(p, total, total);
    out.s_action = FpMat(p, total, total);
    int off = 0;
    auto put = [](FpMat& M, const FpMat& blk, int r0, int c0) {
        for (int i = 0; i < blk.rows; ++i)
            for (int j = 0; j < blk.cols; ++j) M(r0 + i, c0 + j) = blk(i, j);
    };
    for (size_t b = 0; b < blocks.size(); ++b) {
        const OrbitScenario& sc = in.scenarios[b];
        const int d = blocks[b].space.dim, m = sc.m;
        std::vector<int> grp;
        for (int j = 0; j < m; ++j) {
            const int o = off + j * d;
            put(V.gram, blocks[b].space.gram, o, o);
            FpMat cols(p, total, d);
            for (int i = 0; i < d; ++i) cols(o + i, i) = 1;
            V.blocks.push_back(cols);
            grp.push_back(static_cast<int>(V.blocks.size()) - 1);
            const int next = off + ((j + 1) % m) * d;
            put(out.twist.iota, j + 1 < m ? FpMat::identity(p, d) : blocks[b].g, next, o);
            const FieldElem& u = P.u[b][j];
            if (is_symmetric(sc.classification)) {
                put(out.s_action, mult_matrix(u), o, o);
            } else {
                const int D = d / 2;
                put(out.s_action, mult_matrix(u), o, o);
                put(out.s_action, mult_matrix(u.inv()), o + D, o + D);
            }
        }
        out.twist.groups.push_back(grp);
        off += m * d;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Test matrix

std::string ScenarioConfig::str() const {
    return "p=" + std::to_string(p) + " " + branch_name(branch) + " [" + std::to_string(deg_alpha) + "," +
           std::to_string(deg_pm_alpha) + "," + std::to_string(deg_res) + "," + std::to_string(deg_pm_res) +
           "] sigma=" + std::to_string(sigma_exp);
}

std::vector<ScenarioConfig> scenario_configs(const std::vector<int>& primes, int max_degree) {
    std::vector<ScenarioConfig> out;
    for (int p : primes) {
        auto ok_f = [&](int f) { return f % p != 0; };
        auto fits = [&](int D) { return D <= max_degree && ipow(p, D) <= kMaxFieldOrder; };
        // asym/asym: k_res = k_{+-res} of degree g, f = D / g.
        for (int g = 1; g <= max_degree; ++g)
            for (int f = 1; fits(f * g); ++f)
                if (ok_f(f)) out.push_back({p, Branch::AsymAsym, f * g, f * g, g, g, g});
        // asym/sym-ur: [k_res : k_{+-res}] = 2, D = 2 f g.
        for (int g = 1; g <= max_degree; ++g)
            for (int f = 1; fits(2 * f * g); ++f)
                if (ok_f(f)) out.push_back({p, Branch::AsymSymUr, 2 * f * g, 2 * f * g, 2 * g, g, g});
        // asym/sym-ram: k_res = k_{+-res}, D = n g with n odd.
        for (int g = 1; g <= max_degree; ++g)
            for (int n = 1; fits(n * g); n += 2)
                if (ok_f(n)) out.push_back({p, Branch::AsymSymRam, n * g, n * g, g, g, g});
        // sym-ur/sym-ur: f odd, R = 2 g, D = f R, k_{+-alpha} of degree D / 2.
        for (int g = 1; g <= max_degree; ++g)
            for (int f = 1; fits(2 * f * g); f += 2)
                if (ok_f(f)) out.push_back({p, Branch::SymUrSymUr, 2 * f * g, f * g, 2 * g, g, 2 * g});
        // sym-ur/sym-ram: f even, k_res = k_{+-res} of degree g, D = f g.
        for (int g = 1; g <= max_degree; ++g)
            for (int f = 2; fits(f * g); f += 2)
                if (ok_f(f)) out.push_back({p, Branch::SymUrSymRam, f * g, f * g / 2, g, g, g});
    }
    return out;
}

namespace {

OrbitScenario base_scenario(const ScenarioConfig& c, const FieldElem& C) {
    OrbitScenario sc;
    sc.p = c.p;
    sc.deg_alpha = c.deg_alpha;
    sc.deg_pm_alpha = c.deg_pm_alpha;
    sc.deg_res = c.deg_res;
    sc.deg_pm_res = c.deg_pm_res;
    sc.sigma_exp = c.sigma_exp;
    sc.classification = c.branch;
    sc.C = C;
    sc.m = 1;
    const int base = is_symmetric(c.branch) || c.branch == Branch::AsymAsym ? c.deg_res : c.deg_pm_res;
    sc.l = c.deg_alpha / base;
    return sc;
}

}  // namespace

std::vector<FieldElem> admissible_C(const ScenarioConfig& c) {
    FieldDesc k = gf(c.p, c.deg_alpha);
    std::vector<FieldElem> out;
    for (const auto& x : nonzero_elements(k))
        if (!is_symmetric(c.branch) || x.frob(c.deg_pm_alpha % c.deg_alpha) == -x) out.push_back(x);
    return out;
}

std::vector<OrbitScenario> scenarios_for(const ScenarioConfig& c, const FieldElem& C) {
    std::vector<OrbitScenario> out;
    OrbitScenario sc = base_scenario(c, C);
    for (const auto& e : nonzero_elements(sc.k_alpha())) {
        if (is_symmetric(c.branch)) {
            sc.eta_alpha = e;
            if (e * e.frob(sc.tau_exp()) != symmetric_constraint_target(sc)) continue;
        } else {
            sc.eta_minus_alpha = e;
            sc.eta_alpha = forced_eta_alpha(sc);
        }
        out.push_back(sc);
    }
    return out;
}

std::vector<OrbitScenario> scenario_matrix(const ScenarioConfig& c, size_t cap) {
    std::vector<OrbitScenario> all;
    for (const auto& C : admissible_C(c))
        for (auto& sc : scenarios_for(c, C)) all.push_back(sc);
    if (all.size() <= cap) return all;
    std::vector<OrbitScenario> out;
    const double stride = static_cast<double>(all.size()) / static_cast<double>(cap);
    for (size_t i = 0; i < cap; ++i) out.push_back(all[static_cast<size_t>(static_cast<double>(i) * stride)]);
    return out;
}

}  // namespace wc
