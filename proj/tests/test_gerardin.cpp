#include "doctest.h"

#include <random>

#include "weilchar/gerardin.hpp"

using namespace wc;

namespace {

cplx oracle(const SympSpace& V, const FpMat& g) { return weil_operator(schrodinger_model(V), g).trace(); }

std::vector<TorusDesc> tori(int n) {
    if (n == 1) return {TorusDesc{{{true, 1}}}, TorusDesc{{{false, 1}}}};
    return {TorusDesc{{{false, 1}, {false, 1}}}, TorusDesc{{{false, 1}, {true, 1}}}, TorusDesc{{{true, 1}, {true, 1}}},
            TorusDesc{{{false, 2}}}, TorusDesc{{{true, 2}}}};
}

FpMat diag(int p, const std::vector<int>& d) {
    FpMat m(p, static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = mod_p(d[i], p);
    return m;
}

FpMat cols(int p, int n, const std::vector<Vec>& c) { return from_columns(p, n, c); }

}  // namespace

TEST_CASE("semisimple formula against the Weil oracle") {
    SympSpace V5 = standard_space(5, 1);
    Torus s5 = build_torus(TorusDesc{{{true, 1}}}, V5);
    auto one = char_semisimple(s5, {FieldElem::one(gf(5, 1))});
    CHECK(std::abs(one.value - cplx(5, 0)) < 1e-9);
    FpMat d23 = diag(5, {2, 3});
    // diag(2,3) in the standard space: lies in the split torus up to conjugacy.
    Torus sc = build_torus(TorusDesc{{{true, 1}}}, canonical_space(5, 1));
    auto r = char_semisimple(sc, d23);
    CHECK(std::abs(r.value - oracle(canonical_space(5, 1), d23)) < 1e-8);
    CHECK(std::abs(r.value - cplx(-1, 0)) < 1e-8);

    for (int p : {3, 5, 7}) {
        for (int n : {1, 2}) {
            if (n == 2 && p == 7) continue;
            SympSpace V = standard_space(p, n);
            WeilModel M = schrodinger_model(V);
            for (const auto& d : tori(n)) {
                Torus T = build_torus(d, V);
                double worst = 0;
                for (const auto& pt : T.points()) {
                    auto v = char_semisimple(T, pt);
                    worst = std::max(worst, std::abs(v.value - weil_operator(M, T.element(pt)).trace()));
                }
                INFO("p=" << p << " torus " << d.str());
                CHECK(worst < 1e-8);
            }
        }
    }
    // Order-4 element of the anisotropic torus of Sp_2(F_3).
    Torus c3 = build_torus(TorusDesc{{{false, 1}}}, standard_space(3, 1));
    for (const auto& pt : c3.points()) {
        if (pt[0].order() != 4) continue;
        CHECK(std::abs(char_semisimple(c3, pt).value - oracle(standard_space(3, 1), c3.element(pt))) < 1e-8);
    }
    CHECK_THROWS_AS(char_semisimple(c3, FpMat::from_rows(3, {{1, 1}, {0, 1}})), Error);
}

TEST_CASE("different tori with the same eigenvalues give the same value") {
    for (int p : {3, 5}) {
        SympSpace V = standard_space(p, 2);
        std::vector<Torus> Ts;
        for (const auto& d : tori(2)) Ts.push_back(build_torus(d, V));
        for (size_t a = 0; a < Ts.size(); ++a)
            for (size_t b = a + 1; b < Ts.size(); ++b)
                for (const auto& pa : Ts[a].points())
                    for (const auto& pb : Ts[b].points()) {
                        FpMat ga = Ts[a].element(pa), gb = Ts[b].element(pb);
                        if (charpoly(ga) != charpoly(gb)) continue;
                        CHECK(std::abs(char_semisimple(Ts[a], pa).value - char_semisimple(Ts[b], pb).value) < 1e-9);
                    }
    }
}

TEST_CASE("fixed-point-free formula") {
    SympSpace V5 = standard_space(5, 1);
    FpMat minus = FpMat::identity(5, 2).scaled(4);
    FpMat line = cols(5, 2, {{1, 0}});
    CHECK(char_no_fixed_point(V5, minus, line) == 1);
    CHECK(std::abs(oracle(V5, minus) - cplx(1, 0)) < 1e-9);
    for (int a : {2, 3}) {
        FpMat g = diag(5, {a, inv_mod(a, 5)});
        CHECK(char_no_fixed_point(V5, g, line) == legendre_symbol(a, 5));
    }
    CHECK_THROWS_AS(char_no_fixed_point(V5, FpMat::identity(5, 2), line), Error);

    // Independence of V' and agreement with the oracle: all of Sp_2(F_p), and
    // a sample of Sp_4(F_3).
    for (int p : {3, 5, 7}) {
        SympSpace V = standard_space(p, 1);
        WeilModel M = schrodinger_model(V);
        for (const auto& g : enumerate_sp(V)) {
            if (fixed_space(g).cols) continue;
            auto all = maximal_invariant_isotropics(V, g);
            REQUIRE(!all.empty());
            cplx o = weil_operator(M, g).trace();
            for (const auto& Vp : all) CHECK(std::abs(cplx(char_no_fixed_point(V, g, Vp), 0) - o) < 1e-8);
        }
    }
    SympSpace V = standard_space(3, 2);
    WeilModel M = schrodinger_model(V);
    auto sp = enumerate_sp(V);
    int tested = 0, multi = 0;
    for (size_t i = 0; i < sp.size(); i += 37) {
        const FpMat& g = sp[i];
        if (fixed_space(g).cols) continue;
        auto all = maximal_invariant_isotropics(V, g);
        if (all.size() > 1) ++multi;
        cplx o = weil_operator(M, g).trace();
        for (const auto& Vp : all) CHECK(std::abs(cplx(char_no_fixed_point(V, g, Vp), 0) - o) < 1e-8);
        ++tested;
    }
    CHECK(tested > 100);
    CHECK(multi > 0);
}

TEST_CASE("fixed-line formula") {
    for (int p : {3, 5}) {
        for (int n : {1, 2}) {
            SympSpace V = standard_space(p, n);
            CHECK(std::abs(char_recursive(V, FpMat::identity(p, 2 * n)) - cplx(std::pow(p, n), 0)) < 1e-8);
        }
    }
    // Sp_4(F_3), canonical coordinates: an anisotropic element on one plane and
    // the identity on the other, so the fixed space is a plane.
    SympSpace C = canonical_space(3, 2);
    Torus c3 = build_torus(TorusDesc{{{false, 1}}}, canonical_space(3, 1));
    for (const auto& pt : c3.points()) {
        FpMat h = c3.element(pt);
        if (h.is_identity()) continue;
        FpMat g = FpMat::identity(3, 4);
        g(0, 0) = h(0, 0);
        g(0, 2) = h(0, 1);
        g(2, 0) = h(1, 0);
        g(2, 2) = h(1, 1);
        REQUIRE(is_symplectic(C, g));
        Vec L = {0, 1, 0, 0};
        FpMat V0 = cols(3, 4, {{1, 0, 0, 0}, {0, 0, 1, 0}});
        cplx gauss = fixed_line_gauss_factor(C, g, L, V0);
        CHECK(std::abs(gauss - cplx(3, 0)) < 1e-9);
        CHECK(std::abs(char_fixed_line(C, g, L, V0) - oracle(C, g)) < 1e-8);
        CHECK_THROWS_AS(char_fixed_line(C, g, Vec{1, 0, 0, 0}, V0), Error);
    }
    // The recursion over all semisimple elements of a sample of Sp_4(F_3).
    SympSpace V = standard_space(3, 2);
    WeilModel M = schrodinger_model(V);
    auto sp = enumerate_sp(V);
    int tested = 0;
    for (size_t i = 0; i < sp.size(); i += 29) {
        if (!is_semisimple(sp[i])) continue;
        CHECK(std::abs(char_recursive(V, sp[i]) - weil_operator(M, sp[i]).trace()) < 1e-8);
        ++tested;
    }
    CHECK(tested > 50);
    // And all semisimple elements of Sp_2(F_p).
    for (int p : {3, 5, 7}) {
        SympSpace W = standard_space(p, 1);
        WeilModel MW = schrodinger_model(W);
        for (const auto& g : enumerate_sp(W))
            if (is_semisimple(g)) CHECK(std::abs(char_recursive(W, g) - weil_operator(MW, g).trace()) < 1e-8);
    }
}

TEST_CASE("polarized formula") {
    for (int p : {5, 7}) {
        SympSpace C = canonical_space(p, 1);
        FpMat X = cols(p, 2, {{1, 0}}), Y = cols(p, 2, {{0, 1}});
        CHECK(std::abs(char_polarized(C, FpMat::identity(p, 2), X, Y) - cplx(p, 0)) < 1e-9);
        for (int a = 2; a < p - 1; ++a) {
            FpMat g = diag(p, {a, inv_mod(a, p)});
            cplx v = char_polarized(C, g, X, Y);
            CHECK(std::abs(v - cplx(legendre_symbol(a, p), 0)) < 1e-9);
            CHECK(std::abs(v - oracle(C, g)) < 1e-8);
        }
    }
    SympSpace C4 = canonical_space(5, 2);
    FpMat X = cols(5, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}), Y = cols(5, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    Torus T = build_torus(TorusDesc{{{true, 1}, {true, 1}}}, 5);
    for (int a = 1; a < 5; ++a) {
        FpMat g = diag(5, {a, 1, inv_mod(a, 5), 1});
        cplx v = char_polarized(C4, g, X, Y);
        CHECK(std::abs(v - cplx(legendre_symbol(a, 5) * (a == 1 ? 25 : 5), 0)) < 1e-9);
        CHECK(std::abs(v - oracle(C4, g)) < 1e-8);
    }
    // Agreement with the torus formula on the split torus of Sp_4(F_3).
    SympSpace C3 = canonical_space(3, 2);
    FpMat X3 = cols(3, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}), Y3 = cols(3, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    Torus S = build_torus(TorusDesc{{{true, 2}}}, 3);
    for (const auto& pt : S.points()) {
        FpMat g = S.element(pt);
        // The split factor acts on k° + k°, which is a polarization.
        FpMat P = cols(3, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}), Q = cols(3, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}});
        CHECK(std::abs(char_polarized(S.space, g, P, Q) - char_semisimple(S, pt).value) < 1e-9);
    }
    CHECK_THROWS_AS(char_polarized(C3, weyl_element(3, 2), X3, Y3), Error);
    (void)T;
}

TEST_CASE("character values have quadratic shape") {
    for (int p : {3, 5, 7}) {
        SympSpace V = standard_space(p, 1);
        WeilModel M = schrodinger_model(V);
        for (const auto& g : enumerate_sp(V)) {
            long long a, b;
            CHECK(snap_quadratic(weil_operator(M, g).trace(), p, a, b));
        }
    }
    SympSpace V = standard_space(3, 2);
    WeilModel M = schrodinger_model(V);
    auto sp = enumerate_sp(V);
    for (size_t i = 0; i < sp.size(); i += 101) {
        long long a, b;
        CHECK(snap_quadratic(weil_operator(M, sp[i]).trace(), 3, a, b));
    }
}
