#include <random>
#include <set>

#include "doctest.h"
#include "weilchar/lattice.hpp"

using namespace wc;

static std::vector<long long> prime_factors(long long n) {
    std::vector<long long> r;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            r.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) r.push_back(n);
    return r;
}

TEST_CASE("smith normal form examples") {
    auto s = smith_normal_form({{1, 0}, {0, 1}});
    CHECK(to_imat(s.D) == IMat{{1, 0}, {0, 1}});
    s = smith_normal_form({{2, 0}, {0, 3}});
    CHECK(to_imat(s.D) == IMat{{1, 0}, {0, 6}});
    s = smith_normal_form({{1, -1}, {-1, 1}});
    CHECK(to_imat(s.D) == IMat{{1, 0}, {0, 0}});
}

TEST_CASE("smith normal form on random matrices") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> e(-9, 9), dim(1, 8);
    for (int t = 0; t < 300; ++t) {
        int n = dim(rng), m = dim(rng);
        IMat M(n, IVec(m));
        for (auto& r : M)
            for (auto& x : r) x = e(rng);
        SNF s = smith_normal_form(M);
        REQUIRE(big_mul(big_mul(s.U, to_big(M)), s.V) == s.D);
        REQUIRE(abs(big_det(s.U)) == 1);
        REQUIRE(abs(big_det(s.V)) == 1);
        int r = std::min(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j) REQUIRE(s.D[i][j] == 0);
        for (int i = 0; i + 1 < r; ++i) {
            REQUIRE(s.D[i][i] >= 0);
            if (s.D[i][i] != 0) REQUIRE(s.D[i + 1][i + 1] % s.D[i][i] == 0);
            else REQUIRE(s.D[i + 1][i + 1] == 0);
        }
    }
}

TEST_CASE("pi0 torsion") {
    CHECK(pi0_torsion({{-1}}) == std::vector<long long>{2});
    CHECK(pi0_torsion({{0, 1}, {1, 0}}).empty());
    // a permutation has torsion-free coinvariants; the order-3 rotation does not
    CHECK(pi0_torsion({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}).empty());
    CHECK(pi0_torsion({{0, -1}, {1, -1}}) == std::vector<long long>{3});
    CHECK_THROWS_AS(pi0_torsion({{1, 1}, {0, 1}}), Error);
    std::mt19937_64 rng(2024);
    const int orders[] = {2, 3, 4, 6};
    for (int t = 0; t < 200; ++t) {
        int l = orders[t % 4];
        IMat th = random_finite_order(rng, l, 6);
        REQUIRE(int_matrix_order(th) == l);
        for (long long d : pi0_torsion(th))
            for (long long q : prime_factors(d)) REQUIRE(l % q == 0);
    }
}

TEST_CASE("catalogue data are valid") {
    for (auto& name : catalogue_names()) {
        RootDatum d = catalogue(name);
        CHECK_NOTHROW(validate(d));
        Restriction r = restrict_roots(d);
        // Phi / Theta -> Phi_res is a bijection
        std::set<std::set<int>> orbits;
        for (size_t a = 0; a < d.roots.size(); ++a) {
            std::set<int> o;
            IVec cur = d.roots[a];
            do {
                o.insert(root_index(d, cur));
                cur = imat_apply(d.theta, cur);
            } while (cur != d.roots[a]);
            orbits.insert(o);
        }
        CHECK(orbits.size() == r.res.size());
        bool nontype1 = false;
        for (auto& rr : r.res) nontype1 |= rr.type != 1;
        CHECK(nontype1 == has_moved_A_even(d));
    }
    CHECK(catalogue("A2").roots.size() == 6);
    CHECK(catalogue("B2").roots.size() == 8);
    CHECK(catalogue("D4").roots.size() == 24);
    CHECK(catalogue("A4").roots.size() == 20);
}

TEST_CASE("restricted roots for A2 and A3 with the involution") {
    RootDatum a2 = catalogue("A2-inv");
    Restriction r = restrict_roots(a2);
    CHECK(r.res.size() == 4);
    NormSum simple = norm_sum({1, 0}, a2);
    CHECK(simple.N == IVec{1, 1});
    CHECK(simple.l == 2);
    CHECK(simple.rho == 2);
    CHECK(simple.sigma == 1);
    NormSum high = norm_sum({1, 1}, a2);
    CHECK(high.l == 1);
    CHECK(high.rho == 1);
    CHECK(high.sigma == -1);
    CHECK_THROWS_AS(norm_sum({2, 1}, a2), Error);

    Restriction r3 = restrict_roots(catalogue("A3-inv"));
    for (auto& rr : r3.res) CHECK(rr.type == 1);

    Restriction id = restrict_roots(catalogue("A3"));
    CHECK(id.res.size() == 12);
}

TEST_CASE("descended roots") {
    RootDatum a3 = catalogue("A3");
    std::map<int, QZ> ev;
    for (size_t a = 0; a < a3.roots.size(); ++a) ev[static_cast<int>(a)] = QZ::plus_one();
    CHECK(descended_roots(a3, ev).size() == 12);

    RootDatum a2 = catalogue("A2-inv");
    Restriction r = restrict_roots(a2);
    ev.clear();
    for (size_t a = 0; a < a2.roots.size(); ++a) ev[static_cast<int>(a)] = QZ::plus_one();
    auto keep = descended_roots(a2, ev);
    CHECK(keep.size() == 2);
    for (int k : keep) CHECK(r.res[k].type == 2);

    for (auto& [a, v] : ev) v = QZ{1, 3};
    CHECK(descended_roots(a2, ev).empty());

    ev[root_index(a2, {1, 0})] = QZ{1, 2};
    ev[root_index(a2, {0, 1})] = QZ{0, 1};
    CHECK_THROWS_AS(descended_roots(a2, ev), Error);
}
