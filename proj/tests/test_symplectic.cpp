#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "weilchar/symplectic.hpp"

using namespace wc;

namespace {

long long sp_order(int p, int n) {
    long long r = ipow(p, n * n);
    for (int i = 1; i <= n; ++i) r *= ipow(p, 2 * i) - 1;
    return r;
}

std::vector<HeisElem> all_heis(const SympSpace& V) {
    std::vector<HeisElem> out;
    long long total = ipow(V.p, V.dim + 1);
    for (long long code = 0; code < total; ++code) {
        HeisElem h;
        long long c = code;
        h.v.resize(V.dim);
        for (int& x : h.v) {
            x = static_cast<int>(c % V.p);
            c /= V.p;
        }
        h.z = static_cast<int>(c);
        out.push_back(h);
    }
    return out;
}

std::vector<FieldElem> embed_all(const std::vector<FieldElem>& xs, FieldDesc F) {
    std::vector<FieldElem> r;
    for (const auto& x : xs) r.push_back(embed(x, F));
    std::sort(r.begin(), r.end());
    return r;
}

std::vector<TorusDesc> tori_of_rank(int n) {
    std::vector<TorusDesc> out;
    // Partitions of n into factor degrees, each factor split or norm-one.
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left, int maxd) -> void {
        if (left == 0) {
            parts.push_back(cur);
            return;
        }
        for (int d = std::min(left, maxd); d >= 1; --d) {
            cur.push_back(d);
            self(self, left - d, d);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    for (const auto& ds : parts) {
        int m = static_cast<int>(ds.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
            TorusDesc t;
            for (int i = 0; i < m; ++i) t.factors.push_back({static_cast<bool>((mask >> i) & 1), ds[i]});
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("heisenberg multiplication examples") {
    SympSpace V = standard_space(3, 1);
    HeisElem id{{0, 0}, 0}, e1{{1, 0}, 0}, e2{{0, 1}, 0};
    HeisElem x{{2, 1}, 1};
    CHECK(heis_mul(V, id, x) == x);
    CHECK(V.form(e1.v, e2.v) == 1);
    HeisElem prod = heis_mul(V, e1, e2);
    CHECK(prod.v == Vec{1, 1});
    CHECK(prod.z == 2);
    HeisElem comm = heis_mul(V, heis_mul(V, e1, e2), heis_mul(V, heis_inv(V, e1), heis_inv(V, e2)));
    CHECK(comm.v == Vec{0, 0});
    CHECK(comm.z == V.form(e1.v, e2.v));
    CHECK_THROWS_AS(heis_mul(V, e1, HeisElem{{1, 0, 0, 0}, 0}), Error);
}

TEST_CASE("heisenberg group is associative with the expected center (p=3, n<=2)") {
    for (int n = 1; n <= 2; ++n) {
        SympSpace V = standard_space(3, n);
        auto G = all_heis(V);
        bool assoc = true;
        for (const auto& a : G)
            for (const auto& b : G) {
                HeisElem ab = heis_mul(V, a, b);
                for (const auto& c : G)
                    if (!(heis_mul(V, ab, c) == heis_mul(V, a, heis_mul(V, b, c)))) assoc = false;
            }
        CHECK(assoc);
        std::set<std::pair<Vec, int>> center;
        for (const auto& a : G) {
            bool central = true;
            for (const auto& b : G)
                if (!(heis_mul(V, a, b) == heis_mul(V, b, a))) {
                    central = false;
                    break;
                }
            if (central) center.insert({a.v, a.z});
        }
        CHECK(center.size() == 3);
        for (const auto& c : center) CHECK(std::all_of(c.first.begin(), c.first.end(), [](int x) { return x == 0; }));
    }
}

TEST_CASE("space validation and symplectic bases") {
    CHECK_THROWS_AS(make_space(FpMat::from_rows(3, {{0, 1}, {1, 0}})), Error);
    CHECK_THROWS_AS(make_space(FpMat::from_rows(3, {{0, 0}, {0, 0}})), Error);
    std::mt19937_64 rng(7);
    for (int p : {3, 5, 7}) {
        for (int n = 1; n <= 3; ++n) {
            SympSpace S = standard_space(p, n);
            FpMat g = random_sp(S, rng);
            CHECK(is_symplectic(S, g));
            // A non-standard Gram form obtained by a random change of basis.
            FpMat A = g * transvection(S, Vec(2 * n, 1), 1);
            A(0, 0) = mod_p(A(0, 0) + 1, p);
            if (det(A) == 0) continue;
            SympSpace V = make_space(A.transpose() * S.gram * A);
            FpMat B = symplectic_basis(V);
            FpMat G = B.transpose() * V.gram * B;
            FpMat expect(p, 2 * n, 2 * n);
            for (int i = 0; i < n; ++i) {
                expect(i, n + i) = 1;
                expect(n + i, i) = p - 1;
            }
            CHECK(G == expect);
        }
    }
}

TEST_CASE("Sp enumeration reaches the group order") {
    CHECK(enumerate_sp(standard_space(3, 1)).size() == 24);
    CHECK(enumerate_sp(standard_space(5, 1)).size() == 120);
    CHECK(enumerate_sp(standard_space(7, 1)).size() == 336);
    auto sp4 = enumerate_sp(standard_space(3, 2));
    CHECK(static_cast<long long>(sp4.size()) == sp_order(3, 2));
    SympSpace V = standard_space(3, 2);
    for (size_t i = 0; i < sp4.size(); i += 997) CHECK(is_symplectic(V, sp4[i]));
    CHECK_THROWS_AS(enumerate_sp(standard_space(5, 2)), Error);
}

TEST_CASE("torus examples") {
    Torus s = build_torus(TorusDesc{{{true, 1}}}, standard_space(3, 1));
    CHECK(s.order() == 2);
    std::set<FpMat> els;
    for (const auto& pt : s.points()) els.insert(s.element(pt));
    CHECK(els.count(FpMat::identity(3, 2)) == 1);
    CHECK(els.count(FpMat::identity(3, 2).scaled(2)) == 1);

    Torus c = build_torus(TorusDesc{{{false, 1}}}, standard_space(3, 1));
    CHECK(c.order() == 4);
    long long maxord = 0;
    for (const auto& pt : c.points()) maxord = std::max(maxord, mat_order(c.element(pt)));
    CHECK(maxord == 4);

    Torus m = build_torus(TorusDesc{{{false, 1}, {true, 1}}}, standard_space(3, 2));
    CHECK(m.order() == 8);
    CHECK(m.points().size() == 8);
    CHECK_THROWS_AS(build_torus(TorusDesc{{{false, 1}}}, standard_space(3, 2)), Error);
}

TEST_CASE("tori are symplectic, abelian and of the stated order") {
    for (int p : {3, 5, 7}) {
        for (int n = 1; n <= 2; ++n) {
            SympSpace V = standard_space(p, n);
            for (const auto& d : tori_of_rank(n)) {
                if (ipow(p, 2 * n) > kMaxFieldOrder) continue;
                Torus T = build_torus(d, V);
                auto pts = T.points();
                CHECK(static_cast<long long>(pts.size()) == T.order());
                std::set<FpMat> mats;
                std::vector<FpMat> list;
                for (const auto& pt : pts) {
                    FpMat g = T.element(pt);
                    CHECK(is_symplectic(V, g));
                    mats.insert(g);
                    list.push_back(g);
                }
                CHECK(static_cast<long long>(mats.size()) == T.order());
                for (size_t i = 0; i < list.size(); i += 3)
                    for (size_t j = 0; j < list.size(); j += 2) CHECK(list[i] * list[j] == list[j] * list[i]);
            }
        }
    }
}

TEST_CASE("tori of Sp_2 are their own centralizers") {
    for (int p : {3, 5, 7}) {
        SympSpace V = standard_space(p, 1);
        auto sp = enumerate_sp(V);
        for (bool split : {false, true}) {
            // Over F_3 the split torus has F_3-points {+1, -1}, which is central.
            if (p == 3 && split) continue;
            Torus T = build_torus(TorusDesc{{{split, 1}}}, V);
            std::vector<FpMat> els;
            for (const auto& pt : T.points()) els.push_back(T.element(pt));
            long long cent = 0;
            for (const auto& g : sp)
                if (std::all_of(els.begin(), els.end(), [&](const FpMat& t) { return g * t == t * g; })) ++cent;
            CHECK(cent == T.order());
        }
    }
}

TEST_CASE("weights: orbit structure and agreement with eigenvalues") {
    Torus s = build_torus(TorusDesc{{{true, 1}}}, 5);
    auto Ws = weights(s);
    CHECK(Ws.n_gamma_orbits == 2);
    CHECK(!Ws.gamma_symmetric[0]);
    CHECK(!Ws.gamma_symmetric[1]);
    CHECK(Ws.n_sigma_orbits == 1);
    Torus c = build_torus(TorusDesc{{{false, 1}}}, 3);
    auto Wc = weights(c);
    CHECK(Wc.n_gamma_orbits == 1);
    CHECK(Wc.gamma_symmetric[0]);
    CHECK(Wc.weights.size() == 2);

    for (int p : {3, 5, 7}) {
        for (int n = 1; n <= 2; ++n) {
            if (ipow(p, 2 * n) > kMaxFieldOrder) continue;
            for (const auto& d : tori_of_rank(n)) {
                Torus T = build_torus(d, standard_space(p, n));
                auto W = weights(T);
                CHECK(static_cast<int>(W.weights.size()) == 2 * n);
                // Some point separates every weight from the trivial character.
                for (const auto& w : W.weights) {
                    bool nontrivial = false;
                    for (const auto& pt : T.points())
                        if (!eval_weight(T, w, pt).is_one()) nontrivial = true;
                    if (!(p == 3 && T.desc.factors[w.factor].split && T.desc.factors[w.factor].degree == 1))
                        CHECK(nontrivial);
                }
                for (const auto& pt : T.points()) {
                    auto eig = eigen_multiset(T.element(pt));
                    int L = eig.front().F->degree();
                    for (const auto& w : W.weights) L = std::lcm(L, eval_weight(T, w, pt).F->degree());
                    if (ipow(p, L) > kMaxFieldOrder) continue;
                    FieldDesc F = gf(p, L);
                    std::vector<FieldElem> vals;
                    for (const auto& w : W.weights) vals.push_back(eval_weight(T, w, pt));
                    CHECK(embed_all(eig, F) == embed_all(vals, F));
                }
            }
        }
    }
}

TEST_CASE("eigen multisets") {
    CHECK(eigen_multiset(FpMat::identity(5, 3)) == std::vector<FieldElem>(3, FieldElem::one(gf(5, 1))));
    auto e = eigen_multiset(FpMat::from_rows(5, {{2, 0}, {0, 3}}));
    CHECK(e.size() == 2);
    CHECK(e[0].v == 2);
    CHECK(e[1].v == 3);

    // Permuted diagonal D * phi^r against the union of s-th roots.
    std::mt19937_64 rng(11);
    for (auto [p, n, r] : std::vector<std::tuple<int, int, int>>{{5, 4, 2}, {7, 3, 1}, {7, 4, 2}, {3, 4, 2}, {5, 4, 4}}) {
        const int s = n / r;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<int> a(n);
            for (int& x : a) x = 1 + static_cast<int>(rng() % (p - 1));
            FpMat D(p, n, n), phi(p, n, n);
            for (int i = 0; i < n; ++i) {
                D(i, i) = a[i];
                phi(i, (i + 1) % n) = 1;
            }
            FpMat g = D * mat_pow(phi, r);
            std::vector<FieldElem> expect;
            for (int i = 0; i < r; ++i) {
                long long prod = 1;
                for (int j = 0; j < s; ++j) prod = prod * a[i + j * r] % p;
                for (int L = 1;; ++L) {
                    auto roots = nth_roots(FieldElem::from_int(gf(p, L), prod), s);
                    if (static_cast<int>(roots.size()) == s) {
                        expect.insert(expect.end(), roots.begin(), roots.end());
                        break;
                    }
                }
            }
            auto eig = eigen_multiset(g);
            int L = eig.front().F->degree();
            for (const auto& x : expect) L = std::lcm(L, x.F->degree());
            CHECK(embed_all(eig, gf(p, L)) == embed_all(expect, gf(p, L)));
        }
    }
}

TEST_CASE("conjugacy witnesses follow the eigenvalues") {
    SympSpace V5 = standard_space(5, 1);
    FpMat t = FpMat::from_rows(5, {{2, 0}, {0, 3}});
    FpMat g = FpMat::from_rows(5, {{3, 0}, {0, 2}});
    auto x = conjugate_in_sp(V5, g, t);
    REQUIRE(x.has_value());
    CHECK(*x * t * inverse(*x) == g);
    CHECK((*x)(0, 0) == 0);
    CHECK((*x)(1, 1) == 0);
    auto id = conjugate_in_sp(V5, t, t);
    REQUIRE(id.has_value());
    CHECK(*id * t == t * *id);
    CHECK(!conjugate_in_sp(V5, t, FpMat::identity(5, 2)).has_value());
    FpMat u = FpMat::from_rows(5, {{1, 1}, {0, 1}});
    CHECK_THROWS_AS(conjugate_in_sp(V5, u, t), Error);

    for (int p : {3, 5, 7}) {
        SympSpace V = standard_space(p, 1);
        auto sp = enumerate_sp(V);
        std::vector<FpMat> semis;
        for (const auto& h : sp)
            if (is_semisimple(h)) semis.push_back(h);
        std::vector<FpMat> reps;
        if (p == 3) {
            reps = semis;
        } else {
            for (bool split : {false, true}) {
                Torus T = build_torus(TorusDesc{{{split, 1}}}, V);
                for (const auto& pt : T.points()) reps.push_back(T.element(pt));
            }
        }
        int agree = 0, total = 0;
        for (const auto& h : semis)
            for (const auto& r : reps) {
                auto w = conjugate_in_sp(V, h, r);
                bool same = same_eigen_multiset(h, r);
                ++total;
                if (w.has_value() == same) ++agree;
                if (w) CHECK(*w * r == h * *w);
            }
        CHECK(agree == total);
    }
}
