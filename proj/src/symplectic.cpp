#include "weilchar/symplectic.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace wc {

namespace {

struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
        size_t h = 1469598103934665603ull;
        for (int x : v) h = (h ^ static_cast<size_t>(x + 1)) * 1099511628211ull;
        return h;
    }
};

FpMat block_diag(int p, const std::vector<FpMat>& bs) {
    int n = 0;
    for (const auto& b : bs) n += b.rows;
    FpMat m(p, n, n);
    int off = 0;
    for (const auto& b : bs) {
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < b.cols; ++j) m(off + i, off + j) = b(i, j);
        off += b.rows;
    }
    return m;
}

int field_trace_fp(const FieldElem& x) { return trace_to(x, gf(x.p(), 1)).v; }

}  // namespace

int SympSpace::form(const Vec& u, const Vec& v) const {
    if (static_cast<int>(u.size()) != dim || static_cast<int>(v.size()) != dim)
        throw Error(Errc::SpaceMismatch, "vector length differs from the space dimension");
    long long s = 0;
    for (int i = 0; i < dim; ++i) {
        if (u[i] == 0) continue;
        long long r = 0;
        for (int j = 0; j < dim; ++j) r += static_cast<long long>(gram(i, j)) * v[j];
        s += u[i] * (r % p);
    }
    return mod_p(s, p);
}

SympSpace standard_space(int p, int n) {
    if (p < 3 || !is_prime(p)) throw Error(Errc::NotPrime, "p = " + std::to_string(p));
    FpMat g(p, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        g(i, 2 * n - 1 - i) = 1;
        g(2 * n - 1 - i, i) = p - 1;
    }
    return make_space(g);
}

SympSpace make_space(const FpMat& gram, std::vector<FpMat> blocks) {
    SympSpace V;
    V.p = gram.p;
    V.dim = gram.rows;
    V.gram = gram;
    V.blocks = std::move(blocks);
    validate(V);
    return V;
}

void validate(const SympSpace& V) {
    if (V.p < 3 || !is_prime(V.p)) throw Error(Errc::NotPrime, "p = " + std::to_string(V.p));
    const FpMat& g = V.gram;
    if (g.rows != V.dim || g.cols != V.dim || V.dim % 2 != 0)
        throw Error(Errc::DimensionMismatch, "gram must be square of even size");
    for (int i = 0; i < V.dim; ++i)
        for (int j = 0; j < V.dim; ++j)
            if (mod_p(g(i, j) + g(j, i), V.p) != 0) throw Error(Errc::FormDegenerate, "gram is not antisymmetric");
    if (V.dim > 0 && det(g) == 0) throw Error(Errc::FormDegenerate, "gram is singular");
    if (V.blocks.empty()) return;
    int total = 0;
    FpMat all(V.p, V.dim, 0);
    for (size_t a = 0; a < V.blocks.size(); ++a) {
        const FpMat& A = V.blocks[a];
        if (A.rows != V.dim) throw Error(Errc::BlockMismatch, "block has the wrong ambient dimension");
        total += A.cols;
        all = hcat(all, A);
        for (size_t b = a + 1; b < V.blocks.size(); ++b)
            if (!(A.transpose() * g * V.blocks[b]).is_zero())
                throw Error(Errc::BlockMismatch, "blocks are not orthogonal");
    }
    if (total != V.dim || rank(all) != V.dim) throw Error(Errc::BlockMismatch, "blocks do not span the space");
}

HeisElem heis_mul(const SympSpace& V, const HeisElem& a, const HeisElem& b) {
    if (static_cast<int>(a.v.size()) != V.dim || static_cast<int>(b.v.size()) != V.dim)
        throw Error(Errc::SpaceMismatch, "Heisenberg element from another space");
    HeisElem r;
    r.v.resize(V.dim);
    for (int i = 0; i < V.dim; ++i) r.v[i] = mod_p(a.v[i] + b.v[i], V.p);
    const int half = inv_mod(2, V.p);
    r.z = mod_p(static_cast<long long>(a.z) + b.z + static_cast<long long>(half) * V.form(a.v, b.v), V.p);
    return r;
}

HeisElem heis_inv(const SympSpace& V, const HeisElem& a) {
    HeisElem r;
    r.v.resize(V.dim);
    for (int i = 0; i < V.dim; ++i) r.v[i] = mod_p(-a.v[i], V.p);
    r.z = mod_p(-a.z, V.p);
    return r;
}

bool is_symplectic(const SympSpace& V, const FpMat& g) {
    if (g.rows != V.dim || g.cols != V.dim || g.p != V.p) return false;
    return g.transpose() * V.gram * g == V.gram;
}

void require_symplectic(const SympSpace& V, const FpMat& g) {
    if (g.rows != V.dim || g.cols != V.dim || g.p != V.p)
        throw Error(Errc::SpaceMismatch, "matrix size does not match the space");
    if (!is_symplectic(V, g)) throw Error(Errc::NotSymplectic, "g^T G g != G");
}

bool is_semisimple(const FpMat& g) { return mat_order(g) % g.p != 0; }

FpMat symplectic_basis(const SympSpace& V) {
    const int p = V.p, n = V.dim / 2;
    std::vector<Vec> pool;
    for (int i = 0; i < V.dim; ++i) {
        Vec e(V.dim, 0);
        e[i] = 1;
        pool.push_back(e);
    }
    std::vector<Vec> es, fs;
    while (static_cast<int>(es.size()) < n) {
        Vec e, f;
        bool found = false;
        for (size_t a = 0; a < pool.size() && !found; ++a)
            for (size_t b = 0; b < pool.size() && !found; ++b) {
                int c = V.form(pool[a], pool[b]);
                if (c == 0) continue;
                e = pool[a];
                f = pool[b];
                int ci = inv_mod(c, p);
                for (int& x : f) x = mod_p(static_cast<long long>(x) * ci, p);
                found = true;
            }
        if (!found) throw Error(Errc::FormDegenerate, "no hyperbolic pair left");
        std::vector<Vec> next;
        for (const Vec& w : pool) {
            int wf = V.form(w, f), we = V.form(w, e);
            Vec r(V.dim);
            for (int i = 0; i < V.dim; ++i)
                r[i] = mod_p(static_cast<long long>(w[i]) - static_cast<long long>(wf) * e[i] +
                                 static_cast<long long>(we) * f[i],
                             p);
            if (std::any_of(r.begin(), r.end(), [](int x) { return x != 0; })) next.push_back(r);
        }
        pool = std::move(next);
        es.push_back(e);
        fs.push_back(f);
    }
    std::vector<Vec> cols = es;
    cols.insert(cols.end(), fs.begin(), fs.end());
    return from_columns(p, V.dim, cols);
}

FpMat polarization_basis(const SympSpace& V, const FpMat& X, const FpMat& Y) {
    const int n = V.dim / 2;
    if (X.rows != V.dim || Y.rows != V.dim || X.cols != n || Y.cols != n)
        throw Error(Errc::NotAPolarization, "both halves must have dimension n");
    if (!is_isotropic(V, X) || !is_isotropic(V, Y)) throw Error(Errc::NotAPolarization, "halves are not isotropic");
    FpMat A = X.transpose() * V.gram * Y;
    if (det(A) == 0) throw Error(Errc::NotAPolarization, "halves are not complementary");
    return hcat(X, Y * inverse(A));
}

FpMat transvection(const SympSpace& V, const Vec& u, int a) {
    FpMat t = FpMat::identity(V.p, V.dim);
    for (int j = 0; j < V.dim; ++j) {
        Vec e(V.dim, 0);
        e[j] = 1;
        int c = mod_p(static_cast<long long>(a) * V.form(e, u), V.p);
        for (int i = 0; i < V.dim; ++i) t(i, j) = mod_p(t(i, j) + static_cast<long long>(c) * u[i], V.p);
    }
    return t;
}

std::vector<FpMat> enumerate_sp(const SympSpace& V, size_t cap) {
    const int p = V.p, d = V.dim;
    std::vector<FpMat> gens;
    long long space = ipow(p, d);
    if (space <= 256) {
        for (long long code = 1; code < space; ++code) {
            Vec u(d);
            long long c = code;
            for (int i = 0; i < d; ++i) {
                u[i] = static_cast<int>(c % p);
                c /= p;
            }
            gens.push_back(transvection(V, u, 1));
        }
    } else {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                Vec u(d, 0);
                u[i] = 1;
                if (j != i) u[j] = 1;
                gens.push_back(transvection(V, u, 1));
            }
    }
    std::unordered_set<std::vector<int>, VecHash> seen;
    std::vector<FpMat> out;
    std::deque<size_t> queue;
    FpMat id = FpMat::identity(p, d);
    seen.insert(id.a);
    out.push_back(id);
    queue.push_back(0);
    while (!queue.empty()) {
        FpMat cur = out[queue.front()];
        queue.pop_front();
        for (const auto& g : gens) {
            FpMat nx = g * cur;
            if (seen.insert(nx.a).second) {
                if (out.size() >= cap) throw Error(Errc::CapExceeded, "Sp(V) exceeds the enumeration cap");
                out.push_back(nx);
                queue.push_back(out.size() - 1);
            }
        }
    }
    return out;
}

FpMat random_sp(const SympSpace& V, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(0, V.p - 1);
    FpMat g = FpMat::identity(V.p, V.dim);
    for (int step = 0; step < 4 * V.dim + 8; ++step) {
        Vec u(V.dim);
        for (int& x : u) x = coef(rng);
        g = transvection(V, u, 1 + coef(rng) % (V.p - 1)) * g;
    }
    return g;
}

FpMat orth_complement(const SympSpace& V, const FpMat& U) {
    if (U.cols == 0) return FpMat::identity(V.p, V.dim);
    return kernel(U.transpose() * V.gram);
}

bool is_isotropic(const SympSpace& V, const FpMat& U) {
    return U.cols == 0 || (U.transpose() * V.gram * U).is_zero();
}

bool is_invariant(const FpMat& g, const FpMat& U) {
    if (U.cols == 0) return true;
    return rank(hcat(U, g * U)) == rank(U);
}

FpMat restrict_map(const FpMat& g, const FpMat& U) {
    FpMat gu = g * U;
    FpMat r(g.p, U.cols, U.cols);
    for (int j = 0; j < U.cols; ++j) {
        Vec x;
        if (!solve(U, gu.col(j), x)) throw Error(Errc::InvalidAction, "subspace is not invariant");
        for (int i = 0; i < U.cols; ++i) r(i, j) = x[i];
    }
    return r;
}

SympSpace subspace(const SympSpace& V, const FpMat& U) { return make_space(U.transpose() * V.gram * U); }

FpMat fixed_space(const FpMat& g) { return kernel(g - FpMat::identity(g.p, g.rows)); }

// ---------------------------------------------------------------------------

std::string TorusDesc::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "+";
        os << (factors[i].split ? "S" : "N") << factors[i].degree;
    }
    return os.str();
}

namespace {

FpMat factor_gram(FieldDesc big, FieldDesc small, bool split, FieldElem c) {
    const int p = big->p();
    if (split) {
        const int d = small->degree();
        FpMat g(p, 2 * d, 2 * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                int t = field_trace_fp(FieldElem(small, static_cast<int>(ipow(p, i))) *
                                       FieldElem(small, static_cast<int>(ipow(p, j))));
                g(i, d + j) = t;
                g(d + j, i) = mod_p(-t, p);
            }
        return g;
    }
    const int k = big->degree(), d = k / 2;
    FpMat g(p, k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            FieldElem bi(big, static_cast<int>(ipow(p, i))), bj(big, static_cast<int>(ipow(p, j)));
            g(i, j) = field_trace_fp(c * bi * bj.frob(d));
        }
    return g;
}

}  // namespace

Torus build_torus(const TorusDesc& desc, int p) {
    if (desc.factors.empty()) throw Error(Errc::DegreeMismatch, "torus without factors");
    Torus T;
    T.desc = desc;
    std::vector<FpMat> grams;
    int off = 0;
    for (const auto& f : desc.factors) {
        if (f.degree < 1) throw Error(Errc::DegreeMismatch, "factor degree must be positive");
        FieldDesc small = gf(p, f.degree);
        FieldDesc big = f.split ? small : gf(p, 2 * f.degree);
        FieldElem c = FieldElem::zero(big);
        if (!f.split) {
            for (int code = 1; code < big->order(); ++code) {
                FieldElem x(big, code);
                if (x.frob(f.degree) == -x) {
                    c = x;
                    break;
                }
            }
        }
        T.big.push_back(big);
        T.small.push_back(small);
        T.form_const.push_back(c);
        T.offsets.push_back(off);
        grams.push_back(factor_gram(big, small, f.split, c));
        off += 2 * f.degree;
    }
    std::vector<FpMat> blocks;
    for (size_t i = 0; i < grams.size(); ++i) {
        FpMat b(p, off, grams[i].rows);
        for (int j = 0; j < grams[i].rows; ++j) b(T.offsets[i] + j, j) = 1;
        blocks.push_back(b);
    }
    T.space = make_space(block_diag(p, grams), blocks);
    T.transport = FpMat::identity(p, off);
    return T;
}

Torus build_torus(const TorusDesc& desc, const SympSpace& V) {
    int total = 0;
    for (const auto& f : desc.factors) total += f.degree;
    if (2 * total != V.dim) throw Error(Errc::DegreeMismatch, "factor degrees do not sum to n");
    Torus T = build_torus(desc, V.p);
    FpMat BT = symplectic_basis(T.space), BV = symplectic_basis(V);
    T.transport = BV * inverse(BT);
    std::vector<FpMat> blocks;
    for (const auto& b : T.space.blocks) blocks.push_back(T.transport * b);
    T.space = V;
    T.space.blocks = blocks;
    validate(T.space);
    return T;
}

FpMat Torus::element(const std::vector<FieldElem>& coords) const {
    if (coords.size() != desc.factors.size())
        throw Error(Errc::ElementNotInTorus, "wrong number of torus coordinates");
    std::vector<FpMat> parts;
    for (size_t i = 0; i < coords.size(); ++i) {
        const auto& f = desc.factors[i];
        if (f.split) {
            FieldElem a = coords[i];
            if (a.F != small[i] || a.is_zero()) throw Error(Errc::ElementNotInTorus, "split coordinate must be a unit of k°");
            parts.push_back(mult_matrix(a));
            parts.push_back(mult_matrix(a.inv()));
        } else {
            FieldElem u = coords[i];
            if (u.F != big[i] || !(u.frob(f.degree) * u).is_one())
                throw Error(Errc::ElementNotInTorus, "norm-one coordinate expected");
            parts.push_back(mult_matrix(u));
        }
    }
    FpMat m = block_diag(space.p, parts);
    if (transport.is_identity()) return m;
    return transport * m * inverse(transport);
}

std::vector<std::vector<FieldElem>> Torus::points() const {
    std::vector<std::vector<FieldElem>> pools;
    for (size_t i = 0; i < desc.factors.size(); ++i)
        pools.push_back(desc.factors[i].split ? nonzero_elements(small[i]) : norm_one_group(big[i]));
    std::vector<std::vector<FieldElem>> out(1);
    for (const auto& pool : pools) {
        std::vector<std::vector<FieldElem>> next;
        for (const auto& prefix : out)
            for (const auto& x : pool) {
                auto v = prefix;
                v.push_back(x);
                next.push_back(std::move(v));
            }
        out = std::move(next);
    }
    return out;
}

long long Torus::order() const {
    long long r = 1;
    for (size_t i = 0; i < desc.factors.size(); ++i)
        r *= desc.factors[i].split ? small[i]->order() - 1 : small[i]->order() + 1;
    return r;
}

WeightData weights(const Torus& T) {
    WeightData W;
    for (size_t i = 0; i < T.desc.factors.size(); ++i) {
        const auto& f = T.desc.factors[i];
        const int d = f.degree;
        int so = W.n_sigma_orbits++;
        W.sigma_size.push_back(2 * d);
        W.sigma_rep.push_back(static_cast<int>(W.weights.size()));
        if (f.split) {
            int gp = W.n_gamma_orbits++, gm = W.n_gamma_orbits++;
            W.gamma_symmetric.push_back(false);
            W.gamma_symmetric.push_back(false);
            for (int j = 0; j < d; ++j) W.weights.push_back({static_cast<int>(i), j, 1, gp, so});
            for (int j = 0; j < d; ++j) W.weights.push_back({static_cast<int>(i), j, -1, gm, so});
        } else {
            int g = W.n_gamma_orbits++;
            W.gamma_symmetric.push_back(true);
            for (int j = 0; j < 2 * d; ++j) W.weights.push_back({static_cast<int>(i), j, 1, g, so});
        }
    }
    return W;
}

FieldElem eval_weight(const Torus&, const Weight& w, const std::vector<FieldElem>& coords) {
    FieldElem x = coords.at(static_cast<size_t>(w.factor)).frob(w.j);
    return w.sign > 0 ? x : x.inv();
}

// ---------------------------------------------------------------------------

namespace {

// Roots with multiplicity of a monic F_p polynomial inside F; empty result
// when the polynomial does not split there.
std::vector<FieldElem> roots_in(const Poly& f, FieldDesc F) {
    std::vector<int> c;
    for (int x : f) c.push_back(F->from_int(x));
    std::vector<FieldElem> out;
    const int deg = static_cast<int>(c.size()) - 1;
    for (int code = 0; code < F->order() && static_cast<int>(out.size()) < deg; ++code) {
        while (c.size() > 1) {
            // synthetic division by (X - code)
            std::vector<int> q(c.size() - 1);
            int carry = 0;
            for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i) {
                carry = F->add(c[i], F->mul(carry, code));
                q[i - 1] = carry;
            }
            int rem = F->add(c[0], F->mul(carry, code));
            if (rem != 0) break;
            c = q;
            out.emplace_back(F, code);
        }
    }
    if (static_cast<int>(out.size()) != deg) return {};
    return out;
}

}  // namespace

std::vector<FieldElem> eigen_multiset(const FpMat& g) {
    Poly f = charpoly(g);
    const int n = g.rows;
    if (n == 0) return {};
    for (int L = 1; L <= 8; ++L) {
        if (ipow(g.p, L) > kMaxFieldOrder) break;
        auto r = roots_in(f, gf(g.p, L));
        if (static_cast<int>(r.size()) == n) {
            std::sort(r.begin(), r.end());
            return r;
        }
    }
    throw Error(Errc::CapExceeded, "splitting field of the characteristic polynomial exceeds the cap");
}

bool same_eigen_multiset(const FpMat& a, const FpMat& b) {
    if (a.rows != b.rows || a.p != b.p) return false;
    auto x = eigen_multiset(a), y = eigen_multiset(b);
    if (x.empty() || y.empty()) return x.empty() && y.empty();
    if (x.front().F != y.front().F) return false;
    return x == y;
}

std::optional<FpMat> conjugate_in_sp(const SympSpace& V, const FpMat& g, const FpMat& t, size_t cap) {
    require_symplectic(V, g);
    require_symplectic(V, t);
    if (!is_semisimple(g) || !is_semisimple(t)) throw Error(Errc::NotSemisimple, "order divisible by p");
    const int n = V.dim, p = V.p;
    const int N = n * n;
    FpMat eq(p, N, N);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int r = i * n + j;
            for (int k = 0; k < n; ++k) {
                eq(r, i * n + k) = mod_p(eq(r, i * n + k) + t(k, j), p);
                eq(r, k * n + j) = mod_p(eq(r, k * n + j) - g(i, k), p);
            }
        }
    FpMat K = kernel(eq);
    const int d = K.cols;
    long long total = ipow(p, d);
    if (d > 40 || static_cast<size_t>(total) > cap)
        throw Error(Errc::CapExceeded, "intertwiner space too large to search");
    std::vector<int> coef(d, 0);
    FpMat X(p, n, n);
    for (long long code = 1; code < total; ++code) {
        long long c = code;
        for (int i = 0; i < d; ++i) {
            coef[i] = static_cast<int>(c % p);
            c /= p;
        }
        for (int e = 0; e < N; ++e) {
            long long s = 0;
            for (int i = 0; i < d; ++i) s += static_cast<long long>(coef[i]) * K(e, i);
            X.a[e] = static_cast<int>(s % p);
        }
        if (is_symplectic(V, X)) return X;
    }
    return std::nullopt;
}

}  // namespace wc
