#include "weilchar/gerardin.hpp"

#include <cmath>
#include <map>
#include <set>

namespace wc {

int legendre_symbol(long long a, int p) {
    int r = mod_p(a, p);
    if (r == 0) throw Error(Errc::ZeroElement, "sgn of zero");
    return sgn_mult(FieldElem(gf(p, 1), r));
}

SemisimpleTerms char_semisimple(const Torus& T, const std::vector<FieldElem>& coords) {
    const int p = T.space.p;
    FpMat t = T.element(coords);
    WeightData W = weights(T);
    SemisimpleTerms r;
    std::vector<bool> counted(W.n_gamma_orbits, false);
    for (const auto& w : W.weights) {
        if (counted[w.gamma_orbit]) continue;
        counted[w.gamma_orbit] = true;
        if (!eval_weight(T, w, coords).is_one()) ++r.l;
    }
    r.dim_fixed = fixed_space(t).cols;
    for (int o = 0; o < W.n_sigma_orbits; ++o) {
        const Weight& w = W.weights[W.sigma_rep[o]];
        const long long q = ipow(p, W.sigma_size[o] / 2);
        const bool sym = W.gamma_symmetric[w.gamma_orbit];
        const long long e = sym ? (1 + q) / 2 : (1 - q) / 2;
        FieldElem v = eval_weight(T, w, coords).pow(e);
        if (v.is_one())
            continue;
        if (v == -FieldElem::one(v.F))
            r.chi = -r.chi;
        else
            throw Error(Errc::InconsistentEvaluation, "chi_Omega is not a sign");
    }
    const double mag = std::pow(static_cast<double>(p), r.dim_fixed / 2.0);
    r.value = cplx((r.l % 2 ? -1.0 : 1.0) * mag * r.chi, 0.0);
    return r;
}

SemisimpleTerms char_semisimple(const Torus& T, const FpMat& t) {
    for (const auto& pt : T.points())
        if (T.element(pt) == t) return char_semisimple(T, pt);
    throw Error(Errc::ElementNotInTorus, "matrix is not a point of the torus");
}

namespace {

FpMat cyclic_span(const FpMat& g, const Vec& v) {
    Vec cur = v;
    FpMat acc(g.p, g.rows, 0);
    while (true) {
        FpMat next = hcat(acc, from_columns(g.p, g.rows, {cur}));
        if (rank(next) == acc.cols) break;
        acc = next;
        cur = g.apply(cur);
    }
    return acc;
}

std::vector<Vec> all_vectors(int p, int d) {
    std::vector<Vec> out;
    long long total = ipow(p, d);
    for (long long code = 1; code < total; ++code) {
        Vec v(d);
        long long c = code;
        for (int& x : v) {
            x = static_cast<int>(c % p);
            c /= p;
        }
        out.push_back(v);
    }
    return out;
}

// Vectors of the span of U (nonzero).
std::vector<Vec> span_vectors(const FpMat& U) {
    std::vector<Vec> out;
    for (const auto& c : all_vectors(U.p, U.cols)) out.push_back(U.apply(c));
    return out;
}

bool in_span(const FpMat& U, const Vec& v) {
    if (U.cols == 0) return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
    return rank(hcat(U, from_columns(U.p, U.rows, {v}))) == rank(U);
}

std::vector<FpMat> isotropic_extensions(const SympSpace& V, const FpMat& g, const FpMat& U) {
    std::vector<FpMat> out;
    std::set<std::vector<int>> seen;
    FpMat W = orth_complement(V, U);
    for (const auto& v : span_vectors(W)) {
        if (in_span(U, v)) continue;
        FpMat E = column_space(hcat(U, cyclic_span(g, v)));
        if (!is_isotropic(V, E)) continue;
        if (seen.insert(E.a).second) out.push_back(E);
    }
    return out;
}

// Basis of V'^perp in which V' comes first, and the matrix of g there.
void quotient_data(const SympSpace& V, const FpMat& g, const FpMat& Vp, int& dim0, int& det_g_sub, int& det_gm1_quot) {
    FpMat W = orth_complement(V, Vp);
    FpMat B = Vp;
    for (int j = 0; j < W.cols; ++j) {
        Vec c = W.col(j);
        if (!in_span(B, c)) B = hcat(B, from_columns(V.p, V.dim, {c}));
    }
    FpMat gb = restrict_map(g, B);
    const int k = Vp.cols, m = B.cols;
    dim0 = m - k;
    FpMat sub(V.p, k, k), quot(V.p, dim0, dim0);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = gb(i, j);
    for (int i = 0; i < dim0; ++i)
        for (int j = 0; j < dim0; ++j) quot(i, j) = mod_p(gb(k + i, k + j) - (i == j ? 1 : 0), V.p);
    det_g_sub = k ? det(sub) : 1;
    det_gm1_quot = dim0 ? det(quot) : 1;
}

}  // namespace

std::vector<FpMat> maximal_invariant_isotropics(const SympSpace& V, const FpMat& g, size_t cap) {
    require_symplectic(V, g);
    std::vector<FpMat> frontier = {FpMat(V.p, V.dim, 0)};
    std::set<std::vector<int>> seen;
    std::vector<FpMat> maximal;
    size_t visited = 0;
    while (!frontier.empty()) {
        std::vector<FpMat> next;
        for (const auto& U : frontier) {
            auto ext = isotropic_extensions(V, g, U);
            if (ext.empty()) maximal.push_back(U);
            for (auto& E : ext)
                if (seen.insert(E.a).second) {
                    if (++visited > cap) throw Error(Errc::CapExceeded, "too many invariant isotropic subspaces");
                    next.push_back(E);
                }
        }
        frontier = std::move(next);
    }
    return maximal;
}

FpMat some_maximal_invariant_isotropic(const SympSpace& V, const FpMat& g) {
    require_symplectic(V, g);
    FpMat U(V.p, V.dim, 0);
    while (true) {
        FpMat W = orth_complement(V, U);
        bool grown = false;
        for (int j = 0; j < W.cols && !grown; ++j) {
            // Try basis vectors first, then the whole complement.
            Vec v = W.col(j);
            if (in_span(U, v)) continue;
            FpMat E = column_space(hcat(U, cyclic_span(g, v)));
            if (is_isotropic(V, E)) {
                U = E;
                grown = true;
            }
        }
        if (grown) continue;
        auto ext = isotropic_extensions(V, g, U);
        if (ext.empty()) return U;
        U = ext.front();
    }
}

int char_no_fixed_point(const SympSpace& V, const FpMat& g, const FpMat& Vprime) {
    require_symplectic(V, g);
    if (fixed_space(g).cols != 0) throw Error(Errc::HasFixedPoint, "g has a nonzero fixed vector");
    if (!is_isotropic(V, Vprime)) throw Error(Errc::NotIsotropic, "V' is not totally isotropic");
    if (!is_invariant(g, Vprime)) throw Error(Errc::InvalidAction, "V' is not g-invariant");
    if (!isotropic_extensions(V, g, Vprime).empty())
        throw Error(Errc::NotIsotropic, "V' is not maximal among g-invariant isotropic subspaces");
    int dim0, dsub, dq;
    quotient_data(V, g, Vprime, dim0, dsub, dq);
    long long x = (dim0 / 2 % 2 ? -1 : 1) * static_cast<long long>(dsub) * dq;
    return legendre_symbol(x, V.p);
}

namespace {

void check_fixed_line(const SympSpace& V, const FpMat& g, const Vec& L, const FpMat& V0) {
    require_symplectic(V, g);
    if (std::all_of(L.begin(), L.end(), [](int x) { return x == 0; })) throw Error(Errc::LineNotFixed, "zero vector");
    if (g.apply(L) != L) throw Error(Errc::LineNotFixed, "g moves L");
    FpMat Lm = from_columns(V.p, V.dim, {L});
    FpMat Lperp = orth_complement(V, Lm);
    if (!(V0.transpose() * V.gram * Lm).is_zero()) throw Error(Errc::InvalidAction, "V0 is not inside L^perp");
    if (!is_invariant(g, V0)) throw Error(Errc::InvalidAction, "V0 is not g-invariant");
    if (rank(hcat(Lm, V0)) != Lperp.cols || V0.cols + 1 != Lperp.cols)
        throw Error(Errc::InvalidAction, "L^perp is not L + V0");
}

}  // namespace

cplx fixed_line_gauss_factor(const SympSpace& V, const FpMat& g, const Vec& L, const FpMat& V0) {
    check_fixed_line(V, g, L, V0);
    FpMat P = orth_complement(V, V0);
    FpMat Lm = from_columns(V.p, V.dim, {L});
    Vec w;
    for (int j = 0; j < P.cols; ++j)
        if (!in_span(Lm, P.col(j))) {
            w = P.col(j);
            break;
        }
    if (w.empty()) throw Error(Errc::InvalidAction, "V0^perp equals L");
    const int q = V.form(g.apply(w), w);
    cplx s = 0;
    for (int c = 0; c < V.p; ++c) s += theta(V.p, static_cast<long long>(c) * c % V.p * q);
    return s;
}

cplx char_fixed_line(const SympSpace& V, const FpMat& g, const Vec& L, const FpMat& V0) {
    cplx gauss = fixed_line_gauss_factor(V, g, L, V0);
    cplx inner = 1;
    if (V0.cols > 0) inner = char_recursive(subspace(V, V0), restrict_map(g, V0));
    return inner * gauss;
}

cplx char_recursive(const SympSpace& V, const FpMat& g) {
    require_symplectic(V, g);
    if (V.dim == 0) return 1;
    FpMat F = fixed_space(g);
    if (F.cols == 0) return char_no_fixed_point(V, g, some_maximal_invariant_isotropic(V, g));
    if (!is_semisimple(g)) throw Error(Errc::NotSemisimple, "fixed points of a non-semisimple element");
    Vec l = F.col(0), w;
    for (int j = 0; j < F.cols; ++j)
        if (V.form(l, F.col(j)) != 0) {
            w = F.col(j);
            break;
        }
    if (w.empty()) throw Error(Errc::FormDegenerate, "fixed space of a semisimple element is degenerate");
    FpMat V0 = orth_complement(V, from_columns(V.p, V.dim, {l, w}));
    return char_fixed_line(V, g, l, V0);
}

cplx char_polarized(const SympSpace& V, const FpMat& g, const FpMat& Vplus, const FpMat& Vminus) {
    require_symplectic(V, g);
    if (!is_semisimple(g)) throw Error(Errc::NotSemisimple, "g is not semisimple");
    const int n = V.dim / 2;
    if (Vplus.cols != n || Vminus.cols != n || !is_isotropic(V, Vplus) || !is_isotropic(V, Vminus) ||
        rank(hcat(Vplus, Vminus)) != V.dim)
        throw Error(Errc::NotAPolarization, "V+ and V- do not form a polarization");
    if (!is_invariant(g, Vplus) || !is_invariant(g, Vminus))
        throw Error(Errc::NotInvariantPolarization, "g does not preserve the polarization");
    int s = n ? legendre_symbol(det(restrict_map(g, Vplus)), V.p) : 1;
    return cplx(s * std::pow(static_cast<double>(V.p), fixed_space(g).cols / 2.0), 0.0);
}

bool snap_quadratic(cplx z, int p, long long& a, long long& b, double tol) {
    const bool real_root = p % 4 == 1;
    const double r = std::sqrt(static_cast<double>(p));
    if (!real_root) {
        a = std::llround(z.real());
        b = std::llround(z.imag() / r);
        return std::abs(z - cplx(static_cast<double>(a), static_cast<double>(b) * r)) < tol;
    }
    if (std::abs(z.imag()) > tol) return false;
    const long long B = static_cast<long long>(std::abs(z.real()) / r) + 2;
    for (long long bb = -B; bb <= B; ++bb) {
        double rest = z.real() - static_cast<double>(bb) * r;
        long long aa = std::llround(rest);
        if (std::abs(rest - static_cast<double>(aa)) < tol) {
            a = aa;
            b = bb;
            return true;
        }
    }
    return false;
}

}  // namespace wc
