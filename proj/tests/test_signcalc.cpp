#include "doctest.h"

#include <thread>

#include "weilchar/signcalc.hpp"

using namespace wc;

namespace {

Perm ident(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

// Disjoint union of two actions; each Galois generator acts trivially on the
// other part.
OrbitAction join(const OrbitAction& a, const OrbitAction& b) {
    OrbitAction r;
    r.size = a.size + b.size;
    auto cat = [&](const Perm& x, const Perm& y) {
        Perm z = x;
        for (int v : y) z.push_back(v + a.size);
        return z;
    };
    r.neg = cat(a.neg, b.neg);
    r.theta = cat(a.theta, b.theta);
    for (const auto& g : a.gamma_gens) r.gamma_gens.push_back(cat(g, ident(b.size)));
    for (const auto& g : b.gamma_gens) r.gamma_gens.push_back(cat(ident(a.size), g));
    return r;
}

// {a, ta, -a, -ta}, Gamma trivial, theta swapping a and ta.
OrbitAction action_swap() { return OrbitAction{4, {}, {2, 3, 0, 1}, {1, 0, 3, 2}}; }
// {a, -a}, Gamma trivial, theta(a) = -a.
OrbitAction action_flip() { return OrbitAction{2, {}, {1, 0}, {1, 0}}; }
// {a, -a}, Gamma swapping them, theta trivial: a symmetric unramified root.
OrbitAction action_sym() { return OrbitAction{2, {{1, 0}}, {1, 0}, {0, 1}}; }
// {a, sa, -a, -sa}, Gamma = <s>, theta(a) = -sa.
OrbitAction action_asym_sym() { return OrbitAction{4, {{1, 0, 3, 2}}, {2, 3, 0, 1}, {3, 2, 1, 0}}; }

OrbitScenario scenario(int p, Branch b, int D, int Dpm, int R, int Rpm, int sigma, int m, int l) {
    OrbitScenario sc;
    sc.p = p;
    sc.classification = b;
    sc.deg_alpha = D;
    sc.deg_pm_alpha = Dpm;
    sc.deg_res = R;
    sc.deg_pm_res = Rpm;
    sc.sigma_exp = sigma;
    sc.m = m;
    sc.l = l;
    return sc;
}

// First admissible eta data for a C.
OrbitScenario with_C(OrbitScenario sc, const FieldElem& C, int which = 0) {
    ScenarioConfig c{sc.p, sc.classification, sc.deg_alpha, sc.deg_pm_alpha, sc.deg_res, sc.deg_pm_res, sc.sigma_exp};
    auto all = scenarios_for(c, C);
    REQUIRE(static_cast<int>(all.size()) > which);
    OrbitScenario r = all[which];
    r.alpha = sc.alpha;
    r.m = sc.m;
    r.l = sc.l;
    return r;
}

}  // namespace

TEST_CASE("orbit classification") {
    OrbitAction triv{2, {}, {1, 0}, {0, 1}};
    auto c0 = classify_orbits(triv);
    CHECK(c0.roots[0].m == 1);
    CHECK(c0.roots[0].l == 1);
    CHECK(c0.roots[0].res_symmetric == c0.roots[0].symmetric);

    auto c1 = classify_orbits(action_swap());
    CHECK(c1.roots[0].m == 2);
    CHECK(c1.roots[0].l == 2);
    CHECK(c1.roots[0].sign == 1);
    CHECK(!c1.roots[0].res_symmetric);
    CHECK(c1.block_reps.size() == 1);

    auto c2 = classify_orbits(action_flip());
    CHECK(c2.roots[0].m == 1);
    CHECK(c2.roots[0].sign == -1);
    CHECK(c2.roots[0].res_symmetric);

    auto c3 = classify_orbits(action_asym_sym());
    CHECK(!c3.roots[0].symmetric);
    CHECK(c3.roots[0].m == 1);
    CHECK(c3.roots[0].l == 2);
    CHECK(c3.roots[0].sign == -1);
    CHECK(c3.roots[0].res_symmetric);

    auto c4 = classify_orbits(action_sym());
    CHECK(c4.roots[0].symmetric);
    CHECK(c4.roots[0].res_symmetric);

    auto j = classify_orbits(join(action_swap(), action_sym()));
    CHECK(j.block_reps == std::vector<int>{0, 4});
    // For asymmetric roots, the branch sign detects the symmetry of alpha_res.
    for (const auto& a : {action_swap(), action_flip(), action_asym_sym()})
        for (const auto& r : classify_orbits(a).roots)
            if (!r.symmetric) CHECK((r.sign < 0) == r.res_symmetric);

    OrbitAction bad = action_swap();
    bad.theta = {1, 0, 2, 3};
    CHECK_THROWS_AS(classify_orbits(bad), Error);
    OrbitAction fixed{2, {}, {0, 1}, {0, 1}};
    CHECK_THROWS_AS(classify_orbits(fixed), Error);
}

TEST_CASE("restricted root types") {
    auto sym1 = scenario(3, Branch::SymUrSymUr, 2, 1, 2, 1, 2, 1, 1);
    CHECK(classify_restricted(sym1) == RestrictedType::SymUnramified);
    auto asym2 = scenario(3, Branch::AsymSymUr, 2, 2, 2, 1, 1, 1, 2);
    CHECK(classify_restricted(asym2) == RestrictedType::SymUnramified);
    auto asym1 = scenario(3, Branch::AsymSymRam, 1, 1, 1, 1, 1, 1, 1);
    CHECK(classify_restricted(asym1) == RestrictedType::SymRamified);
    auto symram = scenario(3, Branch::SymUrSymRam, 2, 1, 1, 1, 1, 1, 2);
    CHECK(classify_restricted(symram) == RestrictedType::SymRamified);
    auto bad = scenario(3, Branch::AsymSymUr, 2, 2, 1, 1, 1, 1, 2);
    CHECK_THROWS_AS(classify_restricted(bad), Error);
    // The type read off the degrees contradicts the stated branch.
    auto wrong = scenario(3, Branch::AsymSymUr, 1, 1, 1, 1, 1, 1, 1);
    wrong.C = wrong.eta_alpha = wrong.eta_minus_alpha = FieldElem::one(gf(3, 1));
    try {
        validate(wrong);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InconsistentDegrees);
    }
}

TEST_CASE("block construction") {
    FieldDesc F3 = gf(3, 1);
    auto sc = scenario(3, Branch::AsymAsym, 1, 1, 1, 1, 1, 1, 1);
    sc.C = sc.eta_alpha = sc.eta_minus_alpha = FieldElem::one(F3);
    BuiltBlock B = build_block(sc);
    CHECK(B.g.is_identity());
    CHECK(B.space.gram == FpMat::from_rows(3, {{0, 1}, {2, 0}}));

    FieldDesc F9 = gf(3, 2);
    auto sym = scenario(3, Branch::SymUrSymUr, 2, 1, 2, 1, 2, 1, 1);
    for (const auto& C : admissible_C({3, Branch::SymUrSymUr, 2, 1, 2, 1, 2})) {
        CHECK(C.frob(1) == -C);
        auto s = with_C(sym, C);
        BuiltBlock Bs = build_block(s);
        CHECK(det(Bs.space.gram) != 0);
        CHECK(is_symplectic(Bs.space, Bs.g));
    }
    CHECK(admissible_C({3, Branch::SymUrSymUr, 2, 1, 2, 1, 2}).size() == 2);

    auto as = scenario(3, Branch::AsymSymUr, 2, 2, 2, 1, 1, 1, 2);
    as.C = FieldElem::one(F9);
    as.eta_minus_alpha = FieldElem::one(F9);
    as.eta_alpha = FieldElem::one(F9);  // needs -varsigma(C)/C = -1
    try {
        build_block(as);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConstraintViolated);
    }
}

TEST_CASE("a symmetric ramified root has no admissible C") {
    for (int p : {3, 5})
        for (int D : {1, 2}) {
            // k_alpha = k_{+-alpha}: tau acts trivially.
            auto sc = scenario(p, Branch::SymUrSymUr, D, D, D, D, D, 1, 1);
            int tried = 0;
            for (const auto& C : nonzero_elements(gf(p, D))) {
                CHECK(C.frob(0) != -C);
                sc.C = sc.eta_alpha = C;
                try {
                    build_block(sc);
                    CHECK(false);
                } catch (const Error& e) {
                    CHECK(e.code() == Errc::FormDegenerate);
                }
                ++tried;
            }
            CHECK(tried == gf(p, D)->order() - 1);
        }
}

TEST_CASE("form preservation holds exactly under the eta constraints") {
    int checked = 0;
    for (const auto& c : scenario_configs({3, 5}, 2)) {
        for (const auto& C : admissible_C(c)) {
            OrbitScenario sc = scenarios_for(c, C).front();
            FieldDesc k = sc.k_alpha();
            for (const auto& a : nonzero_elements(k)) {
                sc.eta_alpha = a;
                if (is_symmetric(c.branch)) {
                    bool constraint = a * a.frob(sc.tau_exp()) == symmetric_constraint_target(sc);
                    BuiltBlock B = build_block_unchecked(sc);
                    CHECK(is_symplectic(B.space, B.g) == constraint);
                    ++checked;
                    continue;
                }
                for (const auto& b : nonzero_elements(k)) {
                    sc.eta_minus_alpha = b;
                    bool constraint = a == forced_eta_alpha(sc);
                    BuiltBlock B = build_block_unchecked(sc);
                    CHECK(is_symplectic(B.space, B.g) == constraint);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("binomial factorization and the torus algorithm") {
    FieldDesc F5 = gf(5, 1);
    auto two = factor_binomial(FieldElem::one(F5), 2, true);
    REQUIRE(two.size() == 2);
    CHECK(two[0].field == F5);
    CHECK(two[1].field == F5);
    CHECK(((two[0].x.v == 1 && two[1].x.v == 4) || (two[0].x.v == 4 && two[1].x.v == 1)));
    auto irr = factor_binomial(FieldElem::from_int(F5, 2), 2, true);
    REQUIRE(irr.size() == 1);
    CHECK(irr[0].field == gf(5, 2));

    // f = 1: a single piece (k_res, beta).
    FieldDesc F9 = gf(3, 2), F3 = gf(3, 1);
    for (const auto& b : nonzero_elements(F9)) {
        FieldElem n = norm_to(b, F3);
        if (!n.is_one() && n != -FieldElem::one(F3)) {
            CHECK_THROWS_AS(torus_algorithm(b, 1, F3, TorusBranch::AsymSym), Error);
            continue;
        }
        TorusCover tc = torus_algorithm(b, 1, F3, TorusBranch::AsymSym);
        if (n.is_one()) {
            REQUIRE(tc.pieces.size() == 2);
            CHECK(tc.pieces[0].x == b);
            CHECK(tc.pieces[1].x == -b);
        } else {
            REQUIRE(tc.pieces.size() == 1);
            CHECK(tc.pieces[0].x == b);
            CHECK(tc.pieces[0].split);
        }
    }
    // f = 2 with norm 1 runs the halving step.
    int halved = 0;
    for (const auto& b : nonzero_elements(F9)) {
        if (!norm_to(b, F3).is_one()) continue;
        TorusCover tc = torus_algorithm(b, 2, F3, TorusBranch::AsymSym);
        REQUIRE(!tc.trace.empty());
        CHECK(tc.trace[0] == "case3 f=2");
        CHECK(tc.trace.size() == 3);
        ++halved;
        // The pieces carry four eigenvalues in total over k_res: 2 f.
        int total = 0;
        for (const auto& pc : tc.pieces) total += (pc.split ? 2 : 1) * pc.field->degree() / 2;
        CHECK(total == 4);
    }
    CHECK(halved == 4);
    CHECK_THROWS_AS(torus_algorithm(FieldElem::one(F9), 3, F3, TorusBranch::AsymSym), Error);
}

TEST_CASE("sign formulas agree with the Weil oracle on every branch") {
    std::map<Branch, int> per_branch;
    int ram_checked = 0, torus_checked = 0, nr_minus = 0;
    for (const auto& c : scenario_configs({3, 5}, 4)) {
        const size_t dimW = static_cast<size_t>(ipow(c.p, is_symmetric(c.branch) ? c.deg_alpha / 2 : c.deg_alpha));
        const size_t cap = dimW >= 625 ? 6 : dimW >= 81 ? 40 : 400;
        for (const auto& sc : scenario_matrix(c, cap)) {
            BlockSign s = block_sign_formula(sc);
            cplx o = block_oracle(sc);
            INFO(c.str() << " C=" << sc.C.str() << " eta=" << sc.eta_alpha.str());
            CHECK(std::abs(s.value() - o) < 1e-8);
            ++per_branch[c.branch];
            if (c.branch == Branch::AsymSymUr || c.branch == Branch::SymUrSymUr) {
                BlockSign t = block_sign_torus(sc);
                CHECK(std::abs(t.value() - o) < 1e-8);
                CHECK(t.sign == t.cover.sign());
                for (const auto& pc : t.cover.pieces) CHECK(sc.deg_alpha % pc.field->degree() == 0);
                // The torus element has the eigenvalues of the block.
                BuiltBlock B = build_block(sc);
                Torus T = build_torus(t.cover.desc(), B.space);
                CHECK(same_eigen_multiset(T.element(t.cover.coords()), B.g));
                ++torus_checked;
                if (c.branch == Branch::AsymSymUr && sc.f() == 1) {
                    FieldElem w = sc.eta_minus_alpha * sc.C;
                    FieldElem delta = -(w.frob(sc.varsigma_exp()) / w);
                    for (const auto& beta : nth_roots(delta, 2))
                        if (norm_to(beta, sc.k_pm_res()) == -FieldElem::one(sc.k_pm_res())) {
                            CHECK(s.dim_fixed == 0);
                            ++nr_minus;
                        }
                }
            }
            if (is_ramified(c.branch)) ++ram_checked;
        }
    }
    for (Branch b : {Branch::AsymAsym, Branch::AsymSymUr, Branch::AsymSymRam, Branch::SymUrSymUr, Branch::SymUrSymRam})
        CHECK(per_branch[b] > 0);
    CHECK(ram_checked > 0);
    CHECK(torus_checked > 0);
    CHECK(nr_minus > 0);
}

TEST_CASE("ramified branches are independent of eta") {
    for (const auto& c : scenario_configs({3, 5}, 4)) {
        if (!is_ramified(c.branch)) continue;
        if (ipow(c.p, is_symmetric(c.branch) ? c.deg_alpha / 2 : c.deg_alpha) > 125) continue;
        for (const auto& C : admissible_C(c)) {
            auto all = scenarios_for(c, C);
            REQUIRE(!all.empty());
            const cplx first = block_oracle(all.front());
            for (const auto& sc : all) CHECK(std::abs(block_oracle(sc) - first) < 1e-9);
            CHECK(ramified_constant(all.front()) == (first.real() > 0 ? 1 : -1));
        }
    }
}

TEST_CASE("ramified constant cache under concurrent insertion") {
    clear_ramified_cache();
    std::vector<OrbitScenario> scs;
    for (const auto& c : scenario_configs({3}, 2))
        if (is_ramified(c.branch))
            for (const auto& C : admissible_C(c)) scs.push_back(scenarios_for(c, C).front());
    REQUIRE(!scs.empty());
    std::vector<std::vector<int>> got(4, std::vector<int>(scs.size()));
    std::vector<std::thread> th;
    for (int t = 0; t < 4; ++t)
        th.emplace_back([&, t] {
            for (size_t i = 0; i < scs.size(); ++i) got[t][i] = ramified_constant(scs[i]);
        });
    for (auto& x : th) x.join();
    for (int t = 1; t < 4; ++t) CHECK(got[t] == got[0]);
    CHECK(ramified_cache_snapshot().size() <= scs.size());
    CHECK(!ramified_cache_snapshot().empty());
}

TEST_CASE("assembled products") {
    const int p = 3;
    FieldDesc F3 = gf(p, 1), F9 = gf(p, 2);

    // Single asymmetric orbit with trivial twist.
    AssembleInput one;
    one.action = action_swap();
    auto base = scenario(p, Branch::AsymAsym, 1, 1, 1, 1, 1, 2, 2);
    base.alpha = 0;
    base = with_C(base, FieldElem::one(F3));
    base.eta_minus_alpha = base.eta_alpha = FieldElem::one(F3);
    one.scenarios = {base};
    one.s_values = {{0, FieldElem::one(F3)}, {1, FieldElem::one(F3)}};
    Assembled a1 = assemble_product(one, true);
    CHECK(std::abs(a1.unfactored - block_sign_formula(base).value()) < 1e-12);

    // Two blocks over F_3: the swapped pair and a symmetric unramified root.
    AssembleInput two;
    two.action = join(action_swap(), action_sym());
    auto sym = scenario(p, Branch::SymUrSymUr, 2, 1, 2, 1, 2, 1, 1);
    sym.alpha = 4;
    auto symC = admissible_C({p, Branch::SymUrSymUr, 2, 1, 2, 1, 2});
    sym = with_C(sym, symC.front());
    two.scenarios = {base, sym};
    auto norm_one = norm_one_group(F9);
    int agreements = 0, flips = 0;
    for (int u0 : {1, 2})
        for (int u1 : {1, 2})
            for (const auto& v : norm_one) {
                two.s_values = {{0, FieldElem::from_int(F3, u0)}, {1, FieldElem::from_int(F3, u1)}, {4, v}};
                Assembled a = assemble_product(two, true);
                CHECK(std::abs(a.factored - a.unfactored) < 1e-12);
                cplx tr = theta_rho(a, cplx(1, 0));
                FullTwist ft = full_twist(two);
                TwistedTrace t = twisted_trace(ft.twist, ft.s_action);
                CHECK(std::abs(t.direct - t.product) < 1e-8);
                CHECK(std::abs(tr - t.direct) < 1e-8);
                ++agreements;
                // Multiplicativity of eps tilde and the sign flip of theta_rho.
                for (int w0 : {1, 2}) {
                    AssembleInput other = two;
                    other.s_values[0].value = FieldElem::from_int(F3, w0);
                    other.s_values[1].value = FieldElem::one(F3);
                    other.s_values[2].value = FieldElem::one(F9);
                    AssembleInput prod = two;
                    prod.s_values[0].value = two.s_values[0].value * other.s_values[0].value;
                    Assembled ao = assemble_product(other, true), ap = assemble_product(prod, true);
                    CHECK(ap.eps_tilde == a.eps_tilde * ao.eps_tilde);
                    if (ao.eps_tilde == -1) {
                        CHECK(std::abs(theta_rho(ap, cplx(0, 1)) + theta_rho(a, cplx(0, 1)) * cplx(1, 0) * 1.0 *
                                           (ap.v_eta_half / a.v_eta_half) *
                                           ((ap.n_ur - a.n_ur) % 2 ? -1.0 : 1.0)) < 1e-9);
                        ++flips;
                    }
                }
            }
    CHECK(agreements == 4 * static_cast<int>(norm_one.size()));
    CHECK(flips > 0);

    // Asymmetric root with symmetric restriction, and a ramified one, against
    // the direct twisted trace.
    for (int which : {0, 1}) {
        AssembleInput in;
        OrbitScenario sc;
        if (which == 0) {
            in.action = action_asym_sym();
            sc = scenario(p, Branch::AsymSymUr, 2, 2, 2, 1, 1, 1, 2);
            sc.alpha = 0;
            sc = with_C(sc, FieldElem::one(F9), 3);
        } else {
            in.action = action_flip();
            sc = scenario(p, Branch::AsymSymRam, 1, 1, 1, 1, 1, 1, 2);
            sc.alpha = 0;
            sc = with_C(sc, FieldElem::one(F3));
        }
        in.scenarios = {sc};
        for (const auto& u : nonzero_elements(sc.k_alpha())) {
            in.s_values = {{0, u}};
            Assembled a = assemble_product(in, true);
            FullTwist ft = full_twist(in);
            TwistedTrace t = twisted_trace(ft.twist, ft.s_action);
            CHECK(std::abs(theta_rho(a, cplx(1, 0)) - t.direct) < 1e-8);
        }
    }

    // Errors.
    AssembleInput missing = two;
    missing.scenarios = {base};
    CHECK_THROWS_AS(assemble_product(missing, true), Error);
    AssembleInput nos = two;
    nos.s_values.pop_back();
    CHECK_THROWS_AS(assemble_product(nos, true), Error);
    two.s_values = {{0, FieldElem::one(F3)}, {1, FieldElem::one(F3)}, {4, FieldElem::one(F9)}};
    Assembled ok = assemble_product(two, true);
    CHECK_THROWS_AS(theta_rho(ok, cplx(2, 0)), Error);
    Assembled unf = assemble_product(two, false);
    CHECK_THROWS_AS(theta_rho(unf, cplx(1, 0)), Error);

    // f = 2 forbids the factored form.
    AssembleInput f2;
    f2.action = OrbitAction{4, {{1, 0, 3, 2}}, {2, 3, 0, 1}, {1, 0, 3, 2}};
    auto sc2 = scenario(p, Branch::AsymAsym, 2, 2, 1, 1, 1, 1, 2);
    sc2.alpha = 0;
    f2.scenarios = {with_C(sc2, FieldElem::one(F9))};
    f2.s_values = {{0, FieldElem::one(F9)}};
    try {
        assemble_product(f2, true);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FRegimeViolated);
    }
    CHECK(std::abs(assemble_product(f2, false).unfactored) > 0.5);
    for (const auto& u : nonzero_elements(F9)) {
        f2.s_values = {{0, u}};
        FullTwist ft = full_twist(f2);
        CHECK(std::abs(assemble_product(f2, false).unfactored - twisted_trace(ft.twist, ft.s_action).direct) < 1e-8);
    }
}
