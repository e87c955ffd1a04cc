#include "doctest.h"

#include <map>
#include <random>

#include "weilchar/weil.hpp"

using namespace wc;

namespace {

double maxabs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<Vec> all_vectors(int p, int d) {
    std::vector<Vec> out;
    long long total = ipow(p, d);
    for (long long code = 0; code < total; ++code) {
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

int legendre(int a, int p) {
    a = mod_p(a, p);
    return gf(p, 1)->pow(a, (p - 1) / 2) == 1 ? 1 : -1;
}

FpMat block_sum(const FpMat& a, const FpMat& b) {
    FpMat m(a.p, a.rows + b.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows; ++i)
        for (int j = 0; j < b.cols; ++j) m(a.rows + i, a.cols + j) = b(i, j);
    return m;
}

// V = V_0 + V_1 (two copies of the standard space of dimension 2n) and iota
// sending block 0 to block 1 by A and block 1 to block 0 by B.
BlockTwist swap_twist(int p, int n, const FpMat& A, const FpMat& B) {
    SympSpace S = standard_space(p, n);
    const int d = 2 * n;
    FpMat G = block_sum(S.gram, S.gram);
    FpMat b0(p, 2 * d, d), b1(p, 2 * d, d);
    for (int i = 0; i < d; ++i) {
        b0(i, i) = 1;
        b1(d + i, i) = 1;
    }
    BlockTwist bt;
    bt.space = make_space(G, {b0, b1});
    bt.iota = FpMat(p, 2 * d, 2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            bt.iota(d + i, j) = A(i, j);
            bt.iota(i, d + j) = B(i, j);
        }
    bt.groups = {{0, 1}};
    return bt;
}

}  // namespace

TEST_CASE("theta and the Schrödinger model") {
    CHECK(std::abs(theta(5, 0) - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(theta(4 + 1, 5) - cplx(1, 0)) < 1e-12);
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {3, 2}}) {
        SympSpace V = standard_space(p, n);
        WeilModel M = schrodinger_model(V);
        CHECK(M.dim == ipow(p, n));
        auto vecs = all_vectors(p, 2 * n);
        std::mt19937_64 rng(3);
        // homomorphism on random pairs, exhaustive when small
        bool exhaustive = vecs.size() <= 27;
        int checks = 0;
        for (size_t i = 0; i < vecs.size(); ++i)
            for (size_t j = 0; j < vecs.size(); ++j) {
                if (!exhaustive && (rng() % 40) != 0) continue;
                HeisElem a{vecs[i], static_cast<int>(rng() % p)}, b{vecs[j], static_cast<int>(rng() % p)};
                CHECK(maxabs(M.rho(a) * M.rho(b) - M.rho(heis_mul(V, a, b))) < 1e-10);
                ++checks;
            }
        CHECK(checks > 0);
        Vec zero(2 * n, 0);
        for (int z = 0; z < p; ++z)
            CHECK(maxabs(M.rho({zero, z}) - theta(p, z) * CMat::Identity(M.dim, M.dim)) < 1e-12);
        for (const auto& v : vecs) {
            cplx tr = M.rho({v, 1}).trace();
            if (v == zero)
                CHECK(std::abs(tr - theta(p, 1) * static_cast<double>(M.dim)) < 1e-9);
            else
                CHECK(std::abs(tr) < 1e-9);
        }
    }
    SympSpace V = standard_space(3, 1);
    WeilModel M = schrodinger_model(V);
    double s = 0;
    for (const auto& v : all_vectors(3, 2))
        for (int z = 0; z < 3; ++z) s += std::norm(M.rho({v, z}).trace());
    CHECK(std::abs(s - 27.0) < 1e-9);
    CHECK_THROWS_AS(schrodinger_model(V, FpMat::from_rows(3, {{1}, {0}}), FpMat::from_rows(3, {{1}, {0}})), Error);
}

TEST_CASE("Weil operators: identity, torus traces, intertwining and multiplicativity") {
    for (int p : {3, 5, 7}) {
        SympSpace V = standard_space(p, 1);
        WeilModel M = schrodinger_model(V);
        auto sp = enumerate_sp(V);
        std::map<std::vector<int>, CMat> om;
        for (const auto& g : sp) om[g.a] = weil_operator(M, g);
        CHECK(maxabs(om[FpMat::identity(p, 2).a] - CMat::Identity(p, p)) < 1e-10);
        for (int a = 2; a < p - 1; ++a) {
            FpMat g = FpMat::from_rows(p, {{a, 0}, {0, inv_mod(a, p)}});
            CHECK(std::abs(om[g.a].trace() - cplx(legendre(a, p), 0)) < 1e-9);
        }
        auto vecs = all_vectors(p, 2);
        for (size_t i = 0; i < sp.size(); i += (p == 7 ? 5 : 1)) {
            const FpMat& g = sp[i];
            const CMat& W = om[g.a];
            CHECK(maxabs(W * W.adjoint() - CMat::Identity(p, p)) < 1e-9);
            for (const auto& v : {Vec{1, 0}, Vec{0, 1}}) {
                HeisElem h{v, 0}, gh{g.apply(v), 0};
                CHECK(maxabs(W * M.rho(h) - M.rho(gh) * W) < 1e-9);
            }
        }
        double worst = 0;
        for (const auto& g : sp)
            for (const auto& h : sp) worst = std::max(worst, maxabs(om[g.a] * om[h.a] - om[(g * h).a]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("Weil operators on Sp_4(F_3) and Sp_4(F_5) are multiplicative") {
    for (int p : {3, 5}) {
        SympSpace C = canonical_space(p, 2);
        std::mt19937_64 rng(p);
        for (int trial = 0; trial < (p == 3 ? 25 : 8); ++trial) {
            FpMat g = random_sp(C, rng), h = random_sp(C, rng);
            CMat a = omega_canonical(p, 2, g), b = omega_canonical(p, 2, h), ab = omega_canonical(p, 2, g * h);
            CHECK(maxabs(a * b - ab) < 1e-8);
        }
    }
}

TEST_CASE("generator model agrees with the averaged Weil operators") {
    std::mt19937_64 rng(5);
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {5, 2}, {3, 2}}) {
        for (int trial = 0; trial < 6; ++trial) {
            FpMat A(p, n, n);
            do {
                for (int& x : A.a) x = static_cast<int>(rng() % p);
            } while (det(A) == 0);
            CHECK(maxabs(omega_canonical(p, n, levi_element(A)) - gen_levi(p, A)) < 1e-8);
            FpMat S(p, n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) S(i, j) = S(j, i) = static_cast<int>(rng() % p);
            CHECK(maxabs(omega_canonical(p, n, unipotent_element(S)) - gen_unipotent(p, S)) < 1e-8);
        }
        // The Weyl element: omega(w) = c F with c^2 p^n = (-1/p)^n for one sign of F.
        CMat W = omega_canonical(p, n, weyl_element(p, n));
        int matched = 0;
        for (int sign : {1, -1}) {
            CMat F = gen_fourier(p, n, sign);
            cplx c = W(0, 0) / F(0, 0);
            if (maxabs(W - c * F) > 1e-8) continue;
            ++matched;
            const double expect = std::pow(legendre(-1, p), n);
            CHECK(std::abs(c * c * static_cast<double>(ipow(p, n)) - cplx(expect, 0)) < 1e-8);
        }
        CHECK(matched == 1);
    }
}

TEST_CASE("SL_2(F_3) convention") {
    FpMat L = FpMat::from_rows(3, {{1, 0}, {1, 1}});
    CHECK(sl2f3_psi(L) == 1);
    CHECK(sl2f3_psi(weyl_element(3, 1)) == 0);
    CHECK(sl2f3_psi(FpMat::identity(3, 2).scaled(2)) == 0);
    CMat W = omega_canonical(3, 1, L);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(3);
    u(1) = 1;
    u(2) = -1;
    CHECK((W * u - theta(3, 1) * u).norm() < 1e-10);
    CMat minus = omega_canonical(3, 1, FpMat::identity(3, 2).scaled(2));
    CHECK((minus * u - u).norm() < 1e-10);
}

TEST_CASE("Schur intertwiners") {
    std::mt19937_64 rng(9);
    SympSpace V5 = standard_space(5, 1);
    WeilModel A = schrodinger_model(V5);
    CMat T = schur_intertwiner(A, A, FpMat::identity(5, 2));
    CHECK(maxabs(T - T(0, 0) * CMat::Identity(5, 5)) < 1e-9);

    // A second model on a space with a non-standard form.
    FpMat Gb = FpMat::from_rows(5, {{0, 2}, {3, 0}});
    WeilModel B = schrodinger_model(make_space(Gb));
    FpMat phi = FpMat::from_rows(5, {{1, 0}, {0, 3}});  // phi^T Gb phi = standard
    REQUIRE(phi.transpose() * Gb * phi == V5.gram);
    CMat T1 = schur_intertwiner(A, B, phi, 1), T2 = schur_intertwiner(A, B, phi, 2);
    Eigen::Index bi, bj;
    T1.cwiseAbs().maxCoeff(&bi, &bj);
    CHECK(maxabs(T2 - (T2(bi, bj) / T1(bi, bj)) * T1) < 1e-9);
    for (const auto& v : all_vectors(5, 2)) {
        HeisElem h{v, 1}, ph{phi.apply(v), 1};
        CHECK(maxabs(T1 * A.rho(h) - B.rho(ph) * T1) < 1e-9);
    }
    CMat Ti = T1.inverse();
    FpMat phii = inverse(phi);
    double worst = 0;
    for (const auto& g : enumerate_sp(V5))
        worst = std::max(worst, maxabs(T1 * weil_operator(A, g) * Ti - weil_operator(B, phi * g * phii)));
    CHECK(worst < 1e-8);

    // Stone-von Neumann at desk scale.
    for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {7, 1}}) {
        SympSpace S = standard_space(p, n);
        WeilModel M1 = schrodinger_model(S);
        FpMat g = random_sp(S, rng);
        SympSpace S2 = make_space(g.transpose() * S.gram * g);
        WeilModel M2 = schrodinger_model(S2);
        CMat X = schur_intertwiner(M1, M2, inverse(g));
        CHECK(maxabs(X) > 1e-6);
    }
    CHECK_THROWS_AS(schur_intertwiner(A, B, FpMat::identity(5, 2)), Error);
}

TEST_CASE("cyclic tensor trace") {
    CMat a = CMat::Random(3, 3);
    auto one = cyclic_tensor_trace({a});
    CHECK(std::abs(one.first - a.trace()) < 1e-12);
    CHECK(std::abs(one.second - a.trace()) < 1e-12);
    auto two = cyclic_tensor_trace({CMat::Identity(2, 2), CMat::Identity(2, 2)});
    CHECK(std::abs(two.first - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(two.second - cplx(2, 0)) < 1e-12);
    std::srand(4);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<CMat> maps;
        for (int j = 0; j < 4; ++j) maps.push_back(CMat::Random(3, 3));
        auto r = cyclic_tensor_trace(maps);
        CHECK(std::abs(r.first - r.second) < 1e-9);
    }
    std::vector<CMat> mixed = {CMat::Random(2, 3), CMat::Random(4, 2), CMat::Random(3, 4)};
    auto r = cyclic_tensor_trace(mixed);
    CHECK(std::abs(r.first - r.second) < 1e-9);
    CHECK_THROWS_AS(cyclic_tensor_trace({CMat::Random(2, 3), CMat::Random(2, 2)}), Error);
}

TEST_CASE("twisted traces") {
    // One block, iota = identity: the ordinary character.
    {
        SympSpace S = standard_space(5, 1);
        FpMat b = FpMat::identity(5, 2);
        BlockTwist bt{make_space(S.gram, {b}), FpMat::identity(5, 2), {{0}}};
        WeilModel M = schrodinger_model(S);
        for (const auto& g : enumerate_sp(S)) {
            auto t = twisted_trace(bt, g);
            CHECK(std::abs(t.product - weil_operator(M, g).trace()) < 1e-8);
            CHECK(std::abs(t.direct - t.product) < 1e-8);
        }
    }
    // Two swapped 2-dimensional blocks over F_3, every block-preserving g.
    SympSpace S3 = standard_space(3, 1);
    auto sp = enumerate_sp(S3);
    std::mt19937_64 rng(21);
    FpMat A = sp[rng() % sp.size()], B = sp[rng() % sp.size()];
    BlockTwist bt = swap_twist(3, 1, A, B);
    {
        auto t = twisted_trace(bt, FpMat::identity(3, 4));
        cplx expect = weil_operator(schrodinger_model(S3), B * A).trace();
        CHECK(std::abs(t.product - expect) < 1e-8);
        CHECK(std::abs(t.direct - expect) < 1e-8);
        CHECK(t.normalization_residual < 1e-9);
    }
    double worst = 0, worst_split = 0;
    for (const auto& g0 : sp)
        for (const auto& g1 : sp) {
            FpMat g = block_sum(g0, g1);
            auto t = twisted_trace(bt, g);
            auto f = twisted_trace(bt, g, ScalarSplit::First, false);
            worst = std::max(worst, std::abs(t.product - t.direct));
            worst_split = std::max(worst_split, std::abs(t.product - f.product));
        }
    CHECK(worst < 1e-8);
    CHECK(worst_split < 1e-8);

    // Two 4-dimensional blocks over F_3: an 81-dimensional tensor product.
    SympSpace S4 = standard_space(3, 2);
    FpMat A4 = random_sp(S4, rng), B4 = random_sp(S4, rng);
    BlockTwist bt4 = swap_twist(3, 2, A4, B4);
    for (int trial = 0; trial < 4; ++trial) {
        FpMat g = block_sum(random_sp(S4, rng), random_sp(S4, rng));
        auto t = twisted_trace(bt4, g);
        CHECK(std::abs(t.product - t.direct) < 1e-8);
    }
    CHECK_THROWS_AS(twisted_trace(bt, FpMat::from_rows(3, {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}})), Error);
}

TEST_CASE("Weil characters are class functions") {
    for (int p : {3, 5}) {
        SympSpace V = standard_space(p, 1);
        WeilModel M = schrodinger_model(V);
        auto sp = enumerate_sp(V);
        std::mt19937_64 rng(p);
        for (int trial = 0; trial < 40; ++trial) {
            const FpMat& g = sp[rng() % sp.size()];
            const FpMat& x = sp[rng() % sp.size()];
            FpMat h = x * g * inverse(x);
            CHECK(std::abs(weil_operator(M, g).trace() - weil_operator(M, h).trace()) < 1e-8);
            if (is_semisimple(g)) {
                auto w = conjugate_in_sp(V, h, g);
                REQUIRE(w.has_value());
                CHECK(std::abs(weil_operator(M, g).trace() - weil_operator(M, *w * g * inverse(*w)).trace()) < 1e-8);
            }
        }
    }
}
