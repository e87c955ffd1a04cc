#include "weilchar/fixtures.hpp"

namespace wc {

std::vector<TorusDesc> sp2_tori() { return {TorusDesc{{{true, 1}}}, TorusDesc{{{false, 1}}}}; }

std::vector<TorusDesc> sp4_tori() {
    return {TorusDesc{{{false, 1}, {false, 1}}}, TorusDesc{{{false, 1}, {true, 1}}}, TorusDesc{{{true, 1}, {true, 1}}},
            TorusDesc{{{false, 2}}}, TorusDesc{{{true, 2}}}};
}

FpMat block_diag(const std::vector<FpMat>& ms) {
    int n = 0;
    for (const auto& m : ms) n += m.rows;
    FpMat r(ms.front().p, n, n);
    int off = 0;
    for (const auto& m : ms) {
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) r(off + i, off + j) = m(i, j);
        off += m.rows;
    }
    return r;
}

BlockTwist make_block_twist(int p, int n, const std::vector<std::vector<int>>& groups, const std::vector<FpMat>& maps) {
    const int d = 2 * n, nb = static_cast<int>(maps.size());
    SympSpace S = standard_space(p, n);
    std::vector<FpMat> grams(nb, S.gram), blocks;
    for (int b = 0; b < nb; ++b) {
        FpMat e(p, d * nb, d);
        for (int i = 0; i < d; ++i) e(b * d + i, i) = 1;
        blocks.push_back(e);
    }
    BlockTwist bt;
    bt.space = make_space(block_diag(grams), blocks);
    bt.iota = FpMat(p, d * nb, d * nb);
    for (const auto& g : groups)
        for (size_t k = 0; k < g.size(); ++k) {
            const int src = g[k], dst = g[(k + 1) % g.size()];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) bt.iota(dst * d + i, src * d + j) = maps[src](i, j);
        }
    bt.groups = groups;
    return bt;
}

namespace {

Perm ident(int n) {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

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

// {a, ta, -a, -ta}, Galois trivial, theta swapping a and ta.
OrbitAction action_swap() { return OrbitAction{4, {}, {2, 3, 0, 1}, {1, 0, 3, 2}}; }
// {a, -a}, Galois trivial, theta(a) = -a.
OrbitAction action_flip() { return OrbitAction{2, {}, {1, 0}, {1, 0}}; }
// {a, -a}, Galois swapping them, theta trivial.
OrbitAction action_sym() { return OrbitAction{2, {{1, 0}}, {1, 0}, {0, 1}}; }
// {a, sa, -a, -sa}, Galois <s>, theta(a) = -sa.
OrbitAction action_asym_sym() { return OrbitAction{4, {{1, 0, 3, 2}}, {2, 3, 0, 1}, {3, 2, 1, 0}}; }
// {a, ta, -a, -ta}, Galois and theta both swapping a and ta.
OrbitAction action_residue() { return OrbitAction{4, {{1, 0, 3, 2}}, {2, 3, 0, 1}, {1, 0, 3, 2}}; }

std::vector<OrbitScenario> block_scenarios(int p, Branch b, int D, int Dpm, int R, int Rpm, int sigma, int alpha,
                                           int m, int l, bool every_eta) {
    ScenarioConfig c{p, b, D, Dpm, R, Rpm, sigma};
    auto Cs = admissible_C(c);
    std::vector<OrbitScenario> out;
    FieldElem C = Cs.front();
    for (const auto& x : Cs)
        if (x.is_one()) C = x;
    for (auto sc : scenarios_for(c, C)) {
        sc.alpha = alpha;
        sc.m = m;
        sc.l = l;
        out.push_back(sc);
        if (!every_eta) break;
    }
    return out;
}

// Every choice of s on the listed roots, for each listed base scenario; the
// first base scenario gets every s, the others only s = 1.
std::vector<AssembleInput> expand(const OrbitAction& action, const std::vector<std::vector<OrbitScenario>>& per_block,
                                  const std::vector<std::pair<int, FieldDesc>>& roots, bool symmetric_last) {
    std::vector<AssembleInput> out;
    std::vector<std::vector<FieldElem>> choices;
    for (size_t i = 0; i < roots.size(); ++i) {
        const bool sym = symmetric_last && i + 1 == roots.size();
        choices.push_back(sym ? norm_one_group(roots[i].second) : nonzero_elements(roots[i].second));
    }
    std::vector<size_t> pick(per_block.size(), 0);
    bool first = true;
    while (true) {
        AssembleInput base;
        base.action = action;
        for (size_t b = 0; b < per_block.size(); ++b) base.scenarios.push_back(per_block[b][pick[b]]);
        std::vector<size_t> idx(roots.size(), 0);
        while (true) {
            AssembleInput in = base;
            for (size_t i = 0; i < roots.size(); ++i)
                in.s_values.push_back({roots[i].first, first ? choices[i][idx[i]] : FieldElem::one(roots[i].second)});
            out.push_back(in);
            if (!first) break;
            size_t i = 0;
            while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
            if (i == idx.size()) break;
        }
        first = false;
        size_t b = 0;
        while (b < pick.size() && ++pick[b] == per_block[b].size()) pick[b++] = 0;
        if (b == pick.size()) break;
    }
    return out;
}

}  // namespace

std::vector<AssemblyFixture> assembly_fixtures(int p) {
    FieldDesc k1 = gf(p, 1), k2 = gf(p, 2);
    std::vector<AssemblyFixture> out;

    auto swap = block_scenarios(p, Branch::AsymAsym, 1, 1, 1, 1, 1, 0, 2, 2, true);
    auto sym = block_scenarios(p, Branch::SymUrSymUr, 2, 1, 2, 1, 2, 4, 1, 1, true);
    out.push_back({"swapped asymmetric pair + symmetric unramified root", true,
                   expand(join(action_swap(), action_sym()), {swap, sym}, {{0, k1}, {1, k1}, {4, k2}}, true)});

    auto as = block_scenarios(p, Branch::AsymSymUr, 2, 2, 2, 1, 1, 0, 1, 2, true);
    out.push_back({"asymmetric root with unramified symmetric restriction", true,
                   expand(action_asym_sym(), {as}, {{0, k2}}, false)});

    auto ram = block_scenarios(p, Branch::AsymSymRam, 1, 1, 1, 1, 1, 0, 1, 2, true);
    out.push_back({"asymmetric root with ramified symmetric restriction", true,
                   expand(action_flip(), {ram}, {{0, k1}}, false)});

    auto res = block_scenarios(p, Branch::AsymAsym, 2, 2, 1, 1, 1, 0, 1, 2, true);
    out.push_back({"asymmetric pair with residue degree 2", false, expand(action_residue(), {res}, {{0, k2}}, false)});
    return out;
}

}  // namespace wc
