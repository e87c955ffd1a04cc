#include "doctest.h"
#include <random>
#include <set>
#include "weilchar/ffield.hpp"
#include "weilchar/fpmat.hpp"

using namespace wc;

TEST_CASE("defining polynomials") {
    CHECK(gf(3, 2)->modulus() == Poly{1, 0, 1});
    CHECK(gf(5, 1)->order() == 5);
    CHECK_THROWS_AS(gf(2, 3), Error);
    CHECK_THROWS_AS(gf(3, 9), Error);
    CHECK_NOTHROW(gf(3, 8));
}

TEST_CASE("trace and norm in GF(9)") {
    FieldDesc F9 = gf(3, 2), F3 = gf(3, 1);
    FieldElem one = FieldElem::one(F9);
    CHECK(trace_to(one, F3).v == 2);
    CHECK(trace_to(FieldElem::zero(F9), F3).v == 0);
    FieldElem t = parse_field_elem("3^2:0,1");
    CHECK(trace_to(t, F3).v == 0);
    CHECK(norm_to(t, F3).v == 1);
    CHECK(t.str() == "3^2:0,1");
}

TEST_CASE("embeddings are compatible ring homomorphisms") {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 4}, {3, 6}, {5, 4}, {7, 2}, {3, 8}}) {
        FieldDesc big = gf(p, k);
        for (int d = 1; d < k; ++d) {
            if (k % d) continue;
            FieldDesc sub = gf(p, d);
            for (auto& a : elements(sub))
                for (auto& b : elements(sub)) {
                    REQUIRE(embed(a * b, big) == embed(a, big) * embed(b, big));
                    REQUIRE(embed(a + b, big) == embed(a, big) + embed(b, big));
                }
            int fixed = 0;
            for (auto& x : elements(big))
                if (x.frob(d) == x) {
                    ++fixed;
                    REQUIRE(lies_in(x, sub));
                }
            CHECK(fixed == sub->order());
            for (int e = 1; e < d; ++e) {
                if (d % e || k % e) continue;
                FieldDesc s2 = gf(p, e);
                for (auto& a : elements(s2)) REQUIRE(embed(embed(a, sub), big) == embed(a, big));
            }
        }
    }
}

TEST_CASE("norm surjective and sgn multiplicative") {
    for (auto [p, k] : std::vector<std::pair<int, int>>{{3, 2}, {3, 4}, {5, 2}, {7, 2}}) {
        FieldDesc big = gf(p, k);
        for (int d = 1; d < k; ++d) {
            if (k % d) continue;
            FieldDesc sub = gf(p, d);
            std::set<int> img;
            for (auto& x : nonzero_elements(big)) img.insert(norm_to(x, sub).v);
            CHECK(static_cast<int>(img.size()) == sub->order() - 1);
        }
    }
    FieldDesc F25 = gf(5, 2);
    for (auto& x : nonzero_elements(F25))
        for (auto& y : nonzero_elements(F25)) REQUIRE(sgn_mult(x * y) == sgn_mult(x) * sgn_mult(y));
    CHECK(sgn_mult(FieldElem::from_int(gf(3, 1), 2)) == -1);
}

TEST_CASE("sgn on norm-one group") {
    FieldDesc F9 = gf(3, 2), F3 = gf(3, 1);
    auto u = norm_one_group(F9);
    CHECK(u.size() == 4);
    for (auto& x : u) {
        int expect = x.order() == 4 ? -1 : 1;
        CHECK(sgn_norm_one(x, F3) == expect);
    }
    CHECK_THROWS_AS(sgn_norm_one(parse_field_elem("3^2:1,1"), gf(3, 1)), Error);
}

TEST_CASE("nth roots") {
    auto r = nth_roots(FieldElem::one(gf(5, 1)), 2);
    CHECK(r.size() == 2);
    CHECK_THROWS_AS(nth_roots(FieldElem::one(gf(3, 2)), 3), Error);
}

TEST_CASE("fpmat basics") {
    FpMat m = FpMat::from_rows(5, {{1, 2}, {3, 4}});
    CHECK(det(m) == mod_p(4 - 6, 5));
    CHECK((m * inverse(m)).is_identity());
    Poly cp = charpoly(m);
    CHECK(cp == Poly{mod_p(-2, 5), mod_p(-5, 5), 1});
    FpMat s = FpMat::from_rows(3, {{1, 1, 0}, {0, 1, 1}, {1, 2, 1}});
    CHECK(rank(s) == 2);
    FpMat k = kernel(s);
    CHECK(k.cols == 1);
    CHECK((s * k).is_zero());
}

TEST_CASE("charpoly against Leverrier-free oracle") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + trial % 6, p = (trial % 2) ? 5 : 7;
        FpMat m(p, n, n);
        for (int& x : m.a) x = rng() % p;
        Poly cp = charpoly(m);
        // Cayley-Hamilton
        FpMat acc(p, n, n);
        FpMat pw = FpMat::identity(p, n);
        for (int i = 0; i <= n; ++i) {
            acc = acc + pw.scaled(cp[i]);
            pw = pw * m;
        }
        REQUIRE(acc.is_zero());
        REQUIRE(mod_p((n % 2 ? -1 : 1) * cp[0], p) == det(m));
    }
}
