#include "weilchar/weil.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

namespace wc {

namespace {

// Integer vectors of F_p^n encoded as sum t_i p^i.
struct Codec {
    int p, n, D;
    Codec(int p_, int n_) : p(p_), n(n_), D(static_cast<int>(ipow(p_, n_))) {}
    Vec decode(int idx) const {
        Vec t(n);
        for (int i = 0; i < n; ++i) {
            t[i] = idx % p;
            idx /= p;
        }
        return t;
    }
    int encode(const Vec& t) const {
        int r = 0;
        for (int i = n - 1; i >= 0; --i) r = r * p + mod_p(t[i], p);
        return r;
    }
};

// Addition, negation and dot tables on F_p^n.
struct Tables {
    Codec c;
    std::vector<int> add, neg, dot;
    explicit Tables(int p, int n) : c(p, n) {
        const int D = c.D;
        add.resize(static_cast<size_t>(D) * D);
        dot.resize(static_cast<size_t>(D) * D);
        neg.resize(D);
        std::vector<Vec> dec(D);
        for (int i = 0; i < D; ++i) dec[i] = c.decode(i);
        for (int i = 0; i < D; ++i) {
            Vec m(n);
            for (int k = 0; k < n; ++k) m[k] = mod_p(-dec[i][k], p);
            neg[i] = c.encode(m);
            for (int j = 0; j < D; ++j) {
                Vec s(n);
                long long d = 0;
                for (int k = 0; k < n; ++k) {
                    s[k] = (dec[i][k] + dec[j][k]) % p;
                    d += dec[i][k] * dec[j][k];
                }
                add[static_cast<size_t>(i) * D + j] = c.encode(s);
                dot[static_cast<size_t>(i) * D + j] = static_cast<int>(d % p);
            }
        }
    }
    int A(int i, int j) const { return add[static_cast<size_t>(i) * c.D + j]; }
    int Dt(int i, int j) const { return dot[static_cast<size_t>(i) * c.D + j]; }
};

const Tables& tables(int p, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Tables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, n}];
    if (!slot) slot = std::make_unique<Tables>(p, n);
    return *slot;
}

std::vector<cplx> theta_table(int p) {
    std::vector<cplx> t(p);
    for (int z = 0; z < p; ++z) t[z] = theta(p, z);
    return t;
}

void egcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return;
    }
    long long x1, y1;
    egcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
}

std::uint64_t hash_mat(const FpMat& g) {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : g.a) h = (h ^ static_cast<std::uint64_t>(x + 1)) * 1099511628211ull;
    return h;
}

int legendre(long long a, int p) {
    a = mod_p(a, p);
    if (a == 0) return 0;
    FieldDesc F = gf(p, 1);
    return F->pow(static_cast<int>(a), (p - 1) / 2) == 1 ? 1 : -1;
}

// Coordinates of the columns of M in the basis given by the columns of B.
FpMat coords_in(const FpMat& B, const FpMat& M) {
    FpMat r(B.p, B.cols, M.cols);
    for (int j = 0; j < M.cols; ++j) {
        Vec x;
        if (!solve(B, M.col(j), x)) throw Error(Errc::BlockMismatch, "vector outside the target block");
        for (int i = 0; i < B.cols; ++i) r(i, j) = x[i];
    }
    return r;
}

}  // namespace

cplx theta(int p, long long z) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(mod_p(z, p)) / p;
    return {std::cos(ang), std::sin(ang)};
}

SympSpace canonical_space(int p, int n) {
    FpMat g(p, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        g(i, n + i) = 1;
        g(n + i, i) = p - 1;
    }
    return make_space(g);
}

Vec WeilModel::canonical(const Vec& v) const { return basis_inv.apply(v); }
FpMat WeilModel::canonical(const FpMat& g) const { return basis_inv * g * basis; }

CMat WeilModel::rho(const HeisElem& h) const {
    if (static_cast<int>(h.v.size()) != space.dim) throw Error(Errc::SpaceMismatch, "Heisenberg element from another space");
    return rho_canonical(p, n, canonical(h.v), h.z);
}

WeilModel schrodinger_model(const SympSpace& V) {
    WeilModel m;
    m.space = V;
    m.p = V.p;
    m.n = V.dim / 2;
    m.dim = static_cast<int>(ipow(V.p, m.n));
    m.basis = symplectic_basis(V);
    m.basis_inv = inverse(m.basis);
    return m;
}

WeilModel schrodinger_model(const SympSpace& V, const FpMat& X, const FpMat& Y) {
    WeilModel m = schrodinger_model(V);
    m.basis = polarization_basis(V, X, Y);
    m.basis_inv = inverse(m.basis);
    return m;
}

CMat rho_canonical(int p, int n, const Vec& xy, int z) {
    const Tables& T = tables(p, n);
    const int D = T.c.D;
    Vec xv(xy.begin(), xy.begin() + n), yv(xy.begin() + n, xy.end());
    const int x = T.c.encode(xv), y = T.c.encode(yv);
    const int half = inv_mod(2, p);
    const int hxy = static_cast<int>(static_cast<long long>(half) * T.Dt(x, y) % p);
    auto th = theta_table(p);
    CMat M = CMat::Zero(D, D);
    for (int t = 0; t < D; ++t) M(t, T.A(t, x)) = th[(z % p + T.Dt(t, y) + hxy) % p];
    return M;
}

CMat omega_projective(int p, int n, const FpMat& g, std::uint64_t seed) {
    if (g.rows != 2 * n || g.cols != 2 * n) throw Error(Errc::SpaceMismatch, "matrix size does not match 2n");
    if (!is_symplectic(canonical_space(p, n), g)) throw Error(Errc::NotSymplectic, "g does not preserve the form");
    const Tables& T = tables(p, n);
    const int D = T.c.D;
    const int half = inv_mod(2, p);
    // Images of (x, 0) and (0, y) under g, split into x- and y-parts.
    std::vector<int> gx_x(D), gx_y(D), gy_x(D), gy_y(D);
    for (int i = 0; i < D; ++i) {
        Vec t = T.c.decode(i);
        Vec vx(2 * n, 0), vy(2 * n, 0);
        for (int k = 0; k < n; ++k) {
            vx[k] = t[k];
            vy[n + k] = t[k];
        }
        Vec a = g.apply(vx), b = g.apply(vy);
        gx_x[i] = T.c.encode(Vec(a.begin(), a.begin() + n));
        gx_y[i] = T.c.encode(Vec(a.begin() + n, a.end()));
        gy_x[i] = T.c.encode(Vec(b.begin(), b.begin() + n));
        gy_y[i] = T.c.encode(Vec(b.begin() + n, b.end()));
    }
    auto th = theta_table(p);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + 17);
    std::uniform_int_distribution<int> pick(0, D - 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
        int a = 0, b = 0;
        if (attempt > 0 || seed != 0) {
            a = pick(rng);
            b = pick(rng);
        }
        CMat M = CMat::Zero(D, D);
        for (int x = 0; x < D; ++x)
            for (int y = 0; y < D; ++y) {
                const int xp = T.A(gx_x[x], gy_x[y]);
                const int yp = T.A(gx_y[x], gy_y[y]);
                // rho(gv): row r = a - x', value theta(r.y' + x'.y'/2)
                const int r = T.A(a, T.neg[xp]);
                long long e1 = T.Dt(r, yp) + static_cast<long long>(half) * T.Dt(xp, yp);
                // rho(-v): row b, column b - x, value theta(-b.y + x.y/2)
                const int c = T.A(b, T.neg[x]);
                long long e2 = -T.Dt(b, y) + static_cast<long long>(half) * T.Dt(x, y);
                M(r, c) += th[mod_p(e1 + e2, p)];
            }
        double best = 0;
        for (int i = 0; i < D; ++i) best = std::max(best, M.row(i).norm());
        if (best < 1e-6) continue;
        return M / best;
    }
    throw Error(Errc::ZeroAverage, "Schur averaging returned zero for every trial");
}

int sl2f3_psi(const FpMat& g) {
    static const std::map<std::vector<int>, int> table = [] {
        std::map<std::vector<int>, int> t;
        FpMat L = FpMat::from_rows(3, {{1, 0}, {1, 1}});
        FpMat w = FpMat::from_rows(3, {{0, 2}, {1, 0}});
        std::vector<std::pair<FpMat, int>> gens = {{L, 1}, {w, 0}};
        std::vector<FpMat> queue = {FpMat::identity(3, 2)};
        t[queue[0].a] = 0;
        for (size_t i = 0; i < queue.size(); ++i) {
            FpMat cur = queue[i];
            int e = t[cur.a];
            for (const auto& [h, v] : gens) {
                FpMat nx = h * cur;
                auto it = t.find(nx.a);
                if (it == t.end()) {
                    t[nx.a] = (e + v) % 3;
                    queue.push_back(nx);
                } else if (it->second != (e + v) % 3) {
                    throw Error(Errc::InvalidAction, "SL_2(F_3) character table is inconsistent");
                }
            }
        }
        return t;
    }();
    auto it = table.find(g.a);
    if (g.p != 3 || g.rows != 2 || it == table.end()) throw Error(Errc::NotSymplectic, "not an element of SL_2(F_3)");
    return it->second;
}

CMat omega_canonical(int p, int n, const FpMat& g) {
    if (g.is_identity()) return CMat::Identity(ipow(p, n), ipow(p, n));
    const long long N = mat_order(g);
    CMat U = omega_projective(p, n, g);
    const long long D = ipow(p, n);
    if (p == 3 && n == 1 && N % 3 == 0) {
        // The +1-eigenline of omega(-1) is spanned by delta_1 - delta_2.
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(3);
        u(1) = 1;
        u(2) = -1;
        cplx lambda = u.dot(U * u) / u.squaredNorm();
        return U * (theta(3, sl2f3_psi(g)) / lambda);
    }
    if (N % p != 0) {
        Eigen::VectorXcd v(D);
        for (long long i = 0; i < D; ++i) v(i) = cplx(1.0 + 0.37 * i, 0.11 * (i % 7));
        Eigen::VectorXcd w = v;
        for (long long k = 0; k < N; ++k) w = U * w;
        cplx kappa = v.dot(w) / v.squaredNorm();
        cplx det = U.partialPivLu().determinant();
        long long a, b;
        egcd(N, D, a, b);
        const double ang = -static_cast<double>(a) * std::arg(kappa) - static_cast<double>(b) * std::arg(det);
        return U * cplx(std::cos(ang), std::sin(ang));
    }
    SympSpace C = canonical_space(p, n);
    std::mt19937_64 rng(hash_mat(g));
    for (int attempt = 0; attempt < 4000; ++attempt) {
        FpMat s = random_sp(C, rng);
        FpMat r = inverse(s) * g;
        if (is_semisimple(s) && is_semisimple(r)) return omega_canonical(p, n, s) * omega_canonical(p, n, r);
    }
    throw Error(Errc::LinearizationFailed, "no semisimple factorization found");
}

CMat weil_operator(const WeilModel& model, const FpMat& g) {
    require_symplectic(model.space, g);
    return omega_canonical(model.p, model.n, model.canonical(g));
}

CMat gen_levi(int p, const FpMat& A) {
    const int n = A.rows;
    const Tables& T = tables(p, n);
    const int D = T.c.D;
    FpMat Ai = inverse(A);
    const double s = legendre(det(A), p);
    CMat M = CMat::Zero(D, D);
    for (int t = 0; t < D; ++t) M(t, T.c.encode(Ai.apply(T.c.decode(t)))) = s;
    return M;
}

CMat gen_unipotent(int p, const FpMat& S) {
    const int n = S.rows;
    const Tables& T = tables(p, n);
    const int D = T.c.D;
    const int half = inv_mod(2, p);
    CMat M = CMat::Zero(D, D);
    for (int t = 0; t < D; ++t) {
        Vec tv = T.c.decode(t);
        long long q = dot(tv, S.apply(tv), p);
        M(t, t) = theta(p, q * half);
    }
    return M;
}

CMat gen_fourier(int p, int n, int sign) {
    const Tables& T = tables(p, n);
    const int D = T.c.D;
    CMat M(D, D);
    for (int t = 0; t < D; ++t)
        for (int s = 0; s < D; ++s) M(t, s) = theta(p, static_cast<long long>(sign) * T.Dt(t, s));
    return M;
}

FpMat levi_element(const FpMat& A) {
    const int n = A.rows;
    FpMat AiT = inverse(A).transpose();
    FpMat g(A.p, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g(i, j) = A(i, j);
            g(n + i, n + j) = AiT(i, j);
        }
    return g;
}

FpMat unipotent_element(const FpMat& S) {
    const int n = S.rows;
    FpMat g = FpMat::identity(S.p, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(n + i, j) = mod_p(-S(i, j), S.p);
    return g;
}

FpMat weyl_element(int p, int n) {
    FpMat g(p, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        g(i, n + i) = 1;
        g(n + i, i) = p - 1;
    }
    return g;
}

CMat schur_intertwiner(const WeilModel& A, const WeilModel& B, const FpMat& phi, std::uint64_t seed) {
    if (A.p != B.p || A.n != B.n) throw Error(Errc::SpaceMismatch, "models over different spaces");
    if (phi.rows != B.space.dim || phi.cols != A.space.dim) throw Error(Errc::SpaceMismatch, "phi has the wrong shape");
    if (!(phi.transpose() * B.space.gram * phi == A.space.gram))
        throw Error(Errc::NotSymplectic, "phi does not preserve the forms");
    return omega_projective(A.p, A.n, B.basis_inv * phi * A.basis, seed);
}

CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

namespace {

constexpr long long kMaxTensorDim = 1024;

// Matrix on W_0 x ... x W_l of v_0 x ... x v_l -> I_l v_l x I_0 v_0 x ... x I_{l-1} v_{l-1}.
CMat cyclic_operator(const std::vector<CMat>& maps) {
    const size_t m = maps.size();
    std::vector<Eigen::Index> d(m);
    for (size_t j = 0; j < m; ++j) d[j] = maps[j].cols();
    CMat K = maps[0];
    for (size_t j = 1; j < m; ++j) K = kron(K, maps[j]);
    // K maps into W_1 x ... x W_l x W_0; move the last factor to the front.
    Eigen::Index total = K.rows();
    CMat P = CMat::Zero(total, total);
    std::vector<Eigen::Index> out_dims(m);
    for (size_t j = 0; j < m; ++j) out_dims[j] = d[(j + 1) % m];
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        std::vector<Eigen::Index> digit(m);
        Eigen::Index r = idx;
        for (size_t j = m; j-- > 0;) {
            digit[j] = r % out_dims[j];
            r /= out_dims[j];
        }
        // digit[j] indexes W_{j+1}; reorder to W_0, W_1, ..., W_l.
        std::vector<Eigen::Index> tuple(m);
        for (size_t j = 0; j < m; ++j) tuple[(j + 1) % m] = digit[j];
        Eigen::Index target = 0;
        for (size_t j = 0; j < m; ++j) target = target * d[j] + tuple[j];
        P(target, idx) = 1;
    }
    return P * K;
}

void check_chain(const std::vector<CMat>& maps) {
    if (maps.empty()) throw Error(Errc::DimensionMismatch, "empty chain");
    const size_t m = maps.size();
    for (size_t j = 0; j < m; ++j)
        if (maps[j].rows() != maps[(j + 1) % m].cols())
            throw Error(Errc::DimensionMismatch, "map " + std::to_string(j) + " does not land in the next space");
}

}  // namespace

std::pair<cplx, cplx> cyclic_tensor_trace(const std::vector<CMat>& maps) {
    check_chain(maps);
    long long total = 1;
    for (const auto& m : maps) total *= m.cols();
    if (total > kMaxTensorDim) throw Error(Errc::CapExceeded, "tensor product too large");
    CMat C = maps[0];
    for (size_t j = 1; j < maps.size(); ++j) C = maps[j] * C;
    return {cyclic_operator(maps).trace(), C.trace()};
}

void validate(const BlockTwist& bt) {
    const SympSpace& V = bt.space;
    validate(V);
    if (V.blocks.empty()) throw Error(Errc::BlockMismatch, "no blocks");
    require_symplectic(V, bt.iota);
    std::vector<int> seen(V.blocks.size(), 0);
    for (const auto& g : bt.groups) {
        if (g.empty()) throw Error(Errc::BlockMismatch, "empty group");
        for (size_t j = 0; j < g.size(); ++j) {
            int k = g[j], nx = g[(j + 1) % g.size()];
            if (k < 0 || k >= static_cast<int>(V.blocks.size())) throw Error(Errc::BlockMismatch, "block index out of range");
            ++seen[k];
            if (V.blocks[k].cols != V.blocks[nx].cols) throw Error(Errc::BlockMismatch, "blocks in a group differ in dimension");
            if (rank(hcat(V.blocks[nx], bt.iota * V.blocks[k])) != V.blocks[nx].cols)
                throw Error(Errc::BlockMismatch, "iota does not map a block onto its successor");
        }
    }
    for (int s : seen)
        if (s != 1) throw Error(Errc::BlockMismatch, "groups must partition the blocks");
}

TwistedTrace twisted_trace(const BlockTwist& bt, const FpMat& g, ScalarSplit split, bool compute_direct) {
    validate(bt);
    const SympSpace& V = bt.space;
    require_symplectic(V, g);
    const size_t nb = V.blocks.size();
    std::vector<WeilModel> models;
    std::vector<FpMat> gk;
    for (size_t k = 0; k < nb; ++k) {
        if (!is_invariant(g, V.blocks[k])) throw Error(Errc::BlockMismatch, "g does not preserve block " + std::to_string(k));
        models.push_back(schrodinger_model(subspace(V, V.blocks[k])));
        gk.push_back(restrict_map(g, V.blocks[k]));
    }
    TwistedTrace out;
    out.product = 1;
    std::vector<CMat> omega_parts;
    std::vector<CMat> group_ops;
    std::vector<int> order;
    for (const auto& grp : bt.groups) {
        const size_t m = grp.size();
        std::vector<FpMat> io(m);  // iota from block grp[j] to grp[j+1], block coordinates
        for (size_t j = 0; j < m; ++j)
            io[j] = coords_in(V.blocks[grp[(j + 1) % m]], bt.iota * V.blocks[grp[j]]);
        std::vector<CMat> I(m);
        for (size_t j = 0; j < m; ++j) I[j] = schur_intertwiner(models[grp[j]], models[grp[(j + 1) % m]], io[j]);
        CMat R = I[0];
        FpMat cyc = io[0];
        for (size_t j = 1; j < m; ++j) {
            R = I[j] * R;
            cyc = io[j] * cyc;
        }
        const WeilModel& M0 = models[grp[0]];
        CMat target = weil_operator(M0, cyc);
        Eigen::Index bi = 0, bj = 0;
        target.cwiseAbs().maxCoeff(&bi, &bj);
        cplx lambda = R(bi, bj) / target(bi, bj);
        if ((R / lambda - target).cwiseAbs().maxCoeff() > 1e-6)
            throw Error(Errc::NotNormalized, "composite intertwiner is not proportional to the Weil operator");
        if (split == ScalarSplit::Even) {
            cplx s = std::pow(lambda, -1.0 / static_cast<double>(m));
            for (auto& x : I) x *= s;
        } else {
            I[0] /= lambda;
        }
        CMat C = I[0];
        for (size_t j = 1; j < m; ++j) C = I[j] * C;
        out.normalization_residual = std::max(out.normalization_residual, (C - target).cwiseAbs().maxCoeff());
        // g_0 o iota_*(g_l) o iota_*^2(g_{l-1}) o ... o iota_*^l(g_1) on block grp[0]
        FpMat h = gk[grp[0]];
        for (size_t j = m - 1; j >= 1; --j) {
            FpMat phi = io[j];
            for (size_t k = j + 1; k < m; ++k) phi = io[k] * phi;
            h = h * (phi * gk[grp[j]] * inverse(phi));
        }
        out.product *= (weil_operator(M0, h) * C).trace();
        if (compute_direct) {
            group_ops.push_back(cyclic_operator(I));
            for (int k : grp) order.push_back(k);
        }
    }
    if (compute_direct) {
        long long total = 1;
        for (int k : order) total *= models[k].dim;
        if (total > kMaxTensorDim) throw Error(Errc::CapExceeded, "tensor product too large for the direct trace");
        CMat Om = weil_operator(models[order[0]], gk[order[0]]);
        for (size_t i = 1; i < order.size(); ++i) Om = kron(Om, weil_operator(models[order[i]], gk[order[i]]));
        CMat Ib = group_ops[0];
        for (size_t i = 1; i < group_ops.size(); ++i) Ib = kron(Ib, group_ops[i]);
        out.direct = (Om * Ib).trace();
    } else {
        out.direct = out.product;
    }
    return out;
}

}  // namespace wc
