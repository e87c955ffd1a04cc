#include "weilchar/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

#include <gmpxx.h>

namespace wc {

IMat imat_identity(int n) {
    IMat m(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IMat imat_mul(const IMat& a, const IMat& b) {
    if (a.empty()) return {};
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a[0].size() != k) throw Error(Errc::DimensionMismatch, "integer matrix product shape mismatch");
    IMat r(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (!a[i][t]) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

IVec imat_apply(const IMat& a, const IVec& v) {
    IVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != v.size()) throw Error(Errc::DimensionMismatch, "integer vector length mismatch");
        for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    }
    return r;
}

IMat imat_sub(const IMat& a, const IMat& b) {
    IMat r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[i][j] -= b[i][j];
    return r;
}

IMat imat_transpose(const IMat& a) {
    if (a.empty()) return {};
    IMat r(a[0].size(), IVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
    return r;
}

long long imat_det(const IMat& a0) {
    int n = static_cast<int>(a0.size());
    if (n == 0) return 1;
    IMat a = a0;
    long long sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int sel = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k]) {
                    sel = i;
                    break;
                }
            if (sel < 0) return 0;
            std::swap(a[k], a[sel]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

BigMat big_mul(const BigMat& a, const BigMat& b) {
    if (a.empty()) return {};
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a[0].size() != k) throw Error(Errc::DimensionMismatch, "integer matrix product shape mismatch");
    BigMat r(n, std::vector<mpz_class>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

mpz_class big_det(const BigMat& a0) {
    int n = static_cast<int>(a0.size());
    if (n == 0) return 1;
    BigMat a = a0;
    mpz_class sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int sel = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    sel = i;
                    break;
                }
            if (sel < 0) return 0;
            std::swap(a[k], a[sel]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

long long idot(const IVec& a, const IVec& b) {
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

IMat imat_unimodular_inverse(const IMat& a) {
    int n = static_cast<int>(a.size());
    SNF s = smith_normal_form(a);
    for (int i = 0; i < n; ++i)
        if (abs(s.D[i][i]) != 1) throw Error(Errc::InvalidDatum, "matrix is not unimodular");
    // M = U^{-1} D V^{-1}  =>  M^{-1} = V D^{-1} U, with D^{-1} = D here
    return to_imat(big_mul(big_mul(s.V, s.D), s.U));
}

namespace {

using Big = mpz_class;
using BMat = BigMat;

// Unimodular 2x2 action on entries a (first) and b (second).
void mix(Big& a, Big& b, const Big& x, const Big& y, const Big& u, const Big& v) {
    Big na = x * a + y * b;
    Big nb = u * a + v * b;
    a = na;
    b = nb;
}

void row_op(BMat& m, int i, int j, const Big& x, const Big& y, const Big& u, const Big& v) {
    for (size_t k = 0; k < m[i].size(); ++k) mix(m[i][k], m[j][k], x, y, u, v);
}

void col_op(BMat& m, int i, int j, const Big& x, const Big& y, const Big& u, const Big& v) {
    for (auto& row : m) mix(row[i], row[j], x, y, u, v);
}

// Coefficients (x, y, u, v) of a unimodular transform sending (a, b) to (gcd, 0).
void eliminator(const Big& a, const Big& b, Big& x, Big& y, Big& u, Big& v) {
    if (b % a == 0) {
        x = 1;
        y = 0;
        u = -(b / a);
        v = 1;
        return;
    }
    Big g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    u = -(b / g);
    v = a / g;
}

}  // namespace

BigMat to_big(const IMat& m) {
    BigMat r(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (long long x : m[i]) r[i].push_back(Big(static_cast<long>(x)));
    return r;
}

IMat to_imat(const BigMat& m) {
    IMat r(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (const mpz_class& x : m[i]) {
            if (!x.fits_slong_p()) throw Error(Errc::CapExceeded, "integer entry exceeds 64 bits");
            r[i].push_back(x.get_si());
        }
    return r;
}

namespace {

BMat big_identity(int n) {
    BMat m(n, std::vector<Big>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

}  // namespace

SNF smith_normal_form(const IMat& M) {
    const int n = static_cast<int>(M.size());
    const int m = n ? static_cast<int>(M[0].size()) : 0;
    BMat D = to_big(M), U = big_identity(n), V = big_identity(m);
    const int r = std::min(n, m);
    Big x, y, u, v;
    for (int t = 0; t < r; ++t) {
        int bi = -1, bj = -1;
        Big best = 0;
        for (int i = t; i < n; ++i)
            for (int j = t; j < m; ++j)
                if (D[i][j] != 0 && (best == 0 || abs(D[i][j]) < best)) {
                    best = abs(D[i][j]);
                    bi = i;
                    bj = j;
                }
        if (bi < 0) break;
        std::swap(D[t], D[bi]);
        std::swap(U[t], U[bi]);
        if (bj != t) {
            col_op(D, t, bj, 0, 1, 1, 0);
            col_op(V, t, bj, 0, 1, 1, 0);
        }
        while (true) {
            bool changed = false;
            for (int i = t + 1; i < n; ++i) {
                if (D[i][t] == 0) continue;
                eliminator(D[t][t], D[i][t], x, y, u, v);
                row_op(D, t, i, x, y, u, v);
                row_op(U, t, i, x, y, u, v);
                changed = true;
            }
            for (int j = t + 1; j < m; ++j) {
                if (D[t][j] == 0) continue;
                eliminator(D[t][t], D[t][j], x, y, u, v);
                col_op(D, t, j, x, y, u, v);
                col_op(V, t, j, x, y, u, v);
                changed = true;
            }
            if (changed) continue;
            int bad = -1;
            for (int i = t + 1; i < n && bad < 0; ++i)
                for (int j = t + 1; j < m; ++j)
                    if (D[i][j] % D[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            row_op(D, t, bad, 1, 1, 0, 1);
            row_op(U, t, bad, 1, 1, 0, 1);
        }
        if (D[t][t] < 0) {
            for (auto& e : D[t]) e = -e;
            for (auto& e : U[t]) e = -e;
        }
    }
    return {U, D, V};
}

int int_matrix_order(const IMat& theta, int limit) {
    int n = static_cast<int>(theta.size());
    IMat I = imat_identity(n), cur = theta;
    for (int l = 1; l <= limit; ++l) {
        if (cur == I) return l;
        cur = imat_mul(cur, theta);
        for (auto& row : cur)
            for (long long x : row)
                if (std::llabs(x) > (1LL << 40)) throw Error(Errc::NotFiniteOrder, "matrix entries grow without bound");
    }
    throw Error(Errc::NotFiniteOrder, "matrix has no finite order up to " + std::to_string(limit));
}

std::vector<long long> pi0_torsion(const IMat& theta) {
    int_matrix_order(theta);
    SNF s = smith_normal_form(imat_sub(imat_identity(static_cast<int>(theta.size())), theta));
    std::vector<long long> t;
    for (size_t i = 0; i < s.D.size() && i < s.D[0].size(); ++i)
        if (s.D[i][i] > 1) t.push_back(s.D[i][i].get_si());
    return t;
}

int root_index(const RootDatum& d, const IVec& v) {
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (d.roots[i] == v) return static_cast<int>(i);
    return -1;
}

void validate(const RootDatum& d) {
    const int n = d.rank;
    auto bad = [](const std::string& s) { throw Error(Errc::InvalidDatum, s); };
    if (n <= 0) bad("rank must be positive");
    if (static_cast<int>(d.theta.size()) != n) bad("theta has wrong size");
    for (auto& r : d.theta)
        if (static_cast<int>(r.size()) != n) bad("theta has wrong size");
    if (d.roots.size() != d.coroots.size()) bad("roots and coroots differ in number");
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (static_cast<int>(d.roots[i].size()) != n || static_cast<int>(d.coroots[i].size()) != n)
            bad("root vector has wrong length");
        if (idot(d.roots[i], d.coroots[i]) != 2) bad("<alpha, alpha^vee> != 2");
        IVec neg = d.roots[i];
        for (auto& x : neg) x = -x;
        if (root_index(d, neg) < 0) bad("Phi is not closed under negation");
    }
    std::set<IVec> uniq(d.roots.begin(), d.roots.end());
    if (uniq.size() != d.roots.size()) bad("duplicate roots");
    int_matrix_order(d.theta);
    IMat th_dual = imat_transpose(imat_unimodular_inverse(d.theta));
    for (size_t i = 0; i < d.roots.size(); ++i) {
        int j = root_index(d, imat_apply(d.theta, d.roots[i]));
        if (j < 0) bad("theta does not permute the roots");
        if (imat_apply(th_dual, d.coroots[i]) != d.coroots[j]) bad("theta is not compatible with the coroots");
    }
}

IVec project(const Restriction& r, const IVec& w) { return imat_apply(r.projection, w); }

Restriction restrict_roots(const RootDatum& d) {
    validate(d);
    const int n = d.rank;
    IMat M = imat_sub(imat_identity(n), d.theta);
    SNF s = smith_normal_form(M);
    int rk = 0;
    for (int i = 0; i < n; ++i)
        if (s.D[i][i] != 0) ++rk;
    IMat Uf = to_imat(s.U);
    // columns of M span U^{-1} D Z^n; saturating drops the divisors
    IMat Uinv = imat_unimodular_inverse(Uf);
    Restriction out;
    out.rank_sat = rk;
    for (int j = 0; j < rk; ++j) {
        IVec c(n);
        for (int i = 0; i < n; ++i) c[i] = Uinv[i][j];
        out.sat_basis.push_back(c);
    }
    for (int i = rk; i < n; ++i) out.projection.push_back(Uf[i]);

    std::map<IVec, int> index;
    out.root_to_res.assign(d.roots.size(), -1);
    for (size_t a = 0; a < d.roots.size(); ++a) {
        IVec v = project(out, d.roots[a]);
        auto it = index.find(v);
        int k;
        if (it == index.end()) {
            k = static_cast<int>(out.res.size());
            index[v] = k;
            out.res.push_back({v, 1, {}});
        } else {
            k = it->second;
        }
        out.res[k].orbit.push_back(static_cast<int>(a));
        out.root_to_res[a] = k;
    }
    for (auto& rr : out.res) {
        IVec twice = rr.vec;
        for (auto& x : twice) x *= 2;
        bool half_ok = std::all_of(rr.vec.begin(), rr.vec.end(), [](long long x) { return x % 2 == 0; });
        IVec half = rr.vec;
        for (auto& x : half) x /= 2;
        if (index.count(twice)) rr.type = 2;
        else if (half_ok && index.count(half)) rr.type = 3;
        else rr.type = 1;
    }
    return out;
}

NormSum norm_sum(const IVec& alpha, const RootDatum& d) {
    if (root_index(d, alpha) < 0) throw Error(Errc::RootNotInDatum, "vector is not a root of the datum");
    NormSum ns;
    ns.N = alpha;
    IVec cur = imat_apply(d.theta, alpha);
    ns.l = 1;
    while (cur != alpha) {
        for (size_t i = 0; i < cur.size(); ++i) ns.N[i] += cur[i];
        cur = imat_apply(d.theta, cur);
        ++ns.l;
    }
    Restriction r = restrict_roots(d);
    int type = r.res[r.root_to_res[root_index(d, alpha)]].type;
    ns.rho = type == 2 ? 2 : 1;
    ns.sigma = type == 3 ? -1 : 1;
    return ns;
}

QZ QZ::normalized() const {
    if (den <= 0) throw Error(Errc::InvalidDatum, "Q/Z denominator must be positive");
    long long g = std::gcd(std::llabs(num), den);
    QZ r{num / g, den / g};
    r.num %= r.den;
    if (r.num < 0) r.num += r.den;
    return r;
}

bool QZ::operator==(const QZ& o) const {
    QZ a = normalized(), b = o.normalized();
    return a.num == b.num && a.den == b.den;
}

std::vector<int> descended_roots(const RootDatum& d, const std::map<int, QZ>& nu_eval) {
    Restriction r = restrict_roots(d);
    std::vector<int> out;
    for (size_t k = 0; k < r.res.size(); ++k) {
        const auto& rr = r.res[k];
        QZ first;
        bool have = false;
        for (int a : rr.orbit) {
            auto it = nu_eval.find(a);
            if (it == nu_eval.end()) throw Error(Errc::InconsistentEvaluation, "missing evaluation for root " + std::to_string(a));
            if (!have) {
                first = it->second;
                have = true;
            } else if (!(first == it->second)) {
                throw Error(Errc::InconsistentEvaluation, "N(alpha)(nu) is not constant on a Theta-orbit");
            }
        }
        QZ sig = rr.type == 3 ? QZ::minus_one() : QZ::plus_one();
        if (first == sig) out.push_back(static_cast<int>(k));
    }
    return out;
}

// --- catalogue --------------------------------------------------------------

namespace {

struct CartanData {
    IMat gram;  // invariant form on simple roots, (alpha_i, alpha_i) in {1, 2}
};

IMat type_A(int n) {
    IMat g(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) {
        g[i][i] = 2;
        if (i + 1 < n) g[i][i + 1] = g[i + 1][i] = -1;
    }
    return g;
}

IMat block_sum(const IMat& a, const IMat& b) {
    int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
    IMat g(n + m, IVec(n + m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = a[i][j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g[n + i][n + j] = b[i][j];
    return g;
}

IMat perm_matrix(const std::vector<int>& perm) {
    // simple root i goes to simple root perm[i]
    int n = static_cast<int>(perm.size());
    IMat t(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) t[perm[i]][i] = 1;
    return t;
}

RootDatum from_gram(const std::string& name, const IMat& gram, const std::vector<int>& perm) {
    const int n = static_cast<int>(gram.size());
    auto form = [&](const IVec& a, const IVec& b) {
        long long s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += a[i] * gram[i][j] * b[j];
        return s;
    };
    std::set<IVec> seen;
    std::vector<IVec> queue;
    for (int i = 0; i < n; ++i) {
        IVec e(n, 0);
        e[i] = 1;
        queue.push_back(e);
        seen.insert(e);
    }
    for (size_t q = 0; q < queue.size(); ++q) {
        IVec b = queue[q];
        for (int i = 0; i < n; ++i) {
            IVec e(n, 0);
            e[i] = 1;
            long long c = 2 * form(b, e) / gram[i][i];
            IVec r = b;
            r[i] -= c;
            if (!seen.count(r)) {
                seen.insert(r);
                queue.push_back(r);
            }
        }
    }
    RootDatum d;
    d.name = name;
    d.rank = n;
    d.roots.assign(seen.begin(), seen.end());
    for (auto& a : d.roots) {
        long long aa = form(a, a);
        IVec c(n);
        for (int j = 0; j < n; ++j) {
            IVec e(n, 0);
            e[j] = 1;
            c[j] = 2 * form(e, a) / aa;
        }
        d.coroots.push_back(c);
    }
    d.theta = perm_matrix(perm);
    return d;
}

std::vector<int> iota(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> reversed(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = n - 1 - i;
    return v;
}

}  // namespace

std::vector<std::string> catalogue_names() {
    return {"A1", "A2", "A2-inv", "A3", "A3-inv", "A4", "A4-inv", "B2", "C2",
            "D4", "D4-swap", "D4-triality", "A1xA1-swap", "A2xA2-swap"};
}

RootDatum catalogue(const std::string& name) {
    if (name == "A1") return from_gram(name, type_A(1), iota(1));
    if (name == "A2") return from_gram(name, type_A(2), iota(2));
    if (name == "A2-inv") return from_gram(name, type_A(2), reversed(2));
    if (name == "A3") return from_gram(name, type_A(3), iota(3));
    if (name == "A3-inv") return from_gram(name, type_A(3), reversed(3));
    if (name == "A4") return from_gram(name, type_A(4), iota(4));
    if (name == "A4-inv") return from_gram(name, type_A(4), reversed(4));
    if (name == "B2") return from_gram(name, {{2, -1}, {-1, 1}}, iota(2));
    if (name == "C2") return from_gram(name, {{1, -1}, {-1, 2}}, iota(2));
    IMat d4 = {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};
    if (name == "D4") return from_gram(name, d4, iota(4));
    if (name == "D4-swap") return from_gram(name, d4, {0, 1, 3, 2});
    if (name == "D4-triality") return from_gram(name, d4, {2, 1, 3, 0});
    if (name == "A1xA1-swap") return from_gram(name, block_sum(type_A(1), type_A(1)), {1, 0});
    if (name == "A2xA2-swap") return from_gram(name, block_sum(type_A(2), type_A(2)), {2, 3, 0, 1});
    throw Error(Errc::InvalidDatum, "unknown catalogue entry '" + name + "'");
}

std::vector<Component> components(const RootDatum& d) {
    const int N = static_cast<int>(d.roots.size());
    std::vector<int> comp(N, -1);
    std::vector<Component> out;
    for (int s = 0; s < N; ++s) {
        if (comp[s] >= 0) continue;
        Component c;
        std::vector<int> stack{s};
        comp[s] = static_cast<int>(out.size());
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            c.roots.push_back(a);
            for (int b = 0; b < N; ++b)
                if (comp[b] < 0 && idot(d.roots[b], d.coroots[a]) != 0) {
                    comp[b] = comp[s];
                    stack.push_back(b);
                }
        }
        // rank of the span of the component, via SNF
        IMat m;
        for (int a : c.roots) m.push_back(d.roots[a]);
        SNF snf = smith_normal_form(m);
        for (size_t i = 0; i < snf.D.size() && i < snf.D[0].size(); ++i)
            if (snf.D[i][i] != 0) ++c.rank;
        long long cnt = static_cast<long long>(c.roots.size());
        c.type_A_even = (c.rank % 2 == 0) && cnt == static_cast<long long>(c.rank) * (c.rank + 1);
        std::sort(c.roots.begin(), c.roots.end());
        out.push_back(c);
    }
    return out;
}

bool has_moved_A_even(const RootDatum& d) {
    auto comps = components(d);
    int l = int_matrix_order(d.theta);
    for (auto& c : comps) {
        if (!c.type_A_even) continue;
        std::set<int> members(c.roots.begin(), c.roots.end());
        IMat pw = d.theta;
        for (int k = 1; k < l; ++k, pw = imat_mul(pw, d.theta)) {
            bool stable = true, moved = false;
            for (int a : c.roots) {
                int b = root_index(d, imat_apply(pw, d.roots[a]));
                if (!members.count(b)) stable = false;
                if (b != a) moved = true;
            }
            if (stable && moved) return true;
        }
    }
    return false;
}

}  // namespace wc

namespace wc {

IMat random_unimodular(std::mt19937_64& rng, int n, int steps) {
    IMat u = imat_identity(n);
    if (n < 2) return u;
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        long long c = coef(rng);
        for (int k = 0; k < n; ++k) u[i][k] += c * u[j][k];
    }
    return u;
}

namespace {

IMat cycle_block(int len, int sign) {
    IMat b(len, IVec(len, 0));
    for (int i = 0; i < len; ++i) b[(i + 1) % len][i] = (i + 1 == len) ? sign : 1;
    return b;
}

IMat companion(int which) {
    if (which == 3) return {{0, -1}, {1, -1}};
    if (which == 4) return {{0, -1}, {1, 0}};
    return {{0, -1}, {1, 1}};
}

IMat append_block(const IMat& a, const IMat& b) {
    int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
    IMat g(n + m, IVec(n + m, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = a[i][j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g[n + i][n + j] = b[i][j];
    return g;
}

}  // namespace

IMat random_finite_order(std::mt19937_64& rng, int l, int max_rank) {
    if (l != 2 && l != 3 && l != 4 && l != 6) throw Error(Errc::InvalidDatum, "order must be 2, 3, 4 or 6");
    if (max_rank < 2) throw Error(Errc::InvalidDatum, "rank must be at least 2");
    std::vector<IMat> options;  // blocks whose order divides l
    options.push_back({{1}});
    if (l % 2 == 0) {
        options.push_back({{-1}});
        options.push_back(cycle_block(2, 1));
    }
    if (l % 3 == 0) {
        options.push_back(cycle_block(3, 1));
        options.push_back(companion(3));
    }
    if (l % 4 == 0) options.push_back(companion(4));
    if (l == 4) options.push_back(cycle_block(2, -1));
    if (l == 6) options.push_back(companion(6));
    std::vector<IMat> forcing;  // blocks of exact order l
    if (l == 2) forcing = {{{-1}}, cycle_block(2, 1)};
    if (l == 3) forcing = {companion(3), cycle_block(3, 1)};
    if (l == 4) forcing = {companion(4), cycle_block(2, -1), cycle_block(4, 1)};
    if (l == 6) forcing = {companion(6), cycle_block(3, -1)};
    std::uniform_int_distribution<int> rank_pick(2, max_rank);
    int target = rank_pick(rng);
    IMat theta;
    for (int tries = 0; tries < 100; ++tries) {
        std::vector<IMat> fits;
        for (auto& b : forcing)
            if (static_cast<int>(b.size()) <= target) fits.push_back(b);
        if (fits.empty()) {
            target = max_rank;
            continue;
        }
        theta = fits[std::uniform_int_distribution<size_t>(0, fits.size() - 1)(rng)];
        break;
    }
    while (static_cast<int>(theta.size()) < target) {
        std::vector<IMat> fits;
        for (auto& b : options)
            if (static_cast<int>(theta.size() + b.size()) <= target) fits.push_back(b);
        theta = append_block(theta, fits[std::uniform_int_distribution<size_t>(0, fits.size() - 1)(rng)]);
    }
    int n = static_cast<int>(theta.size());
    IMat u = random_unimodular(rng, n);
    return imat_mul(imat_mul(u, theta), imat_unimodular_inverse(u));
}

}  // namespace wc
