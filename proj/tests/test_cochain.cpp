#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jetforms/anomaly.hpp"

using namespace jetforms;

namespace {

struct Setup {
    HoloJetPtr J;
    GroupSystemPtr G;
    std::vector<GroupWord> words;
};

Setup setup(int n1 = 1, int n2 = 0) {
    Setup s;
    s.J = holo_jet();
    s.G = inversion_pair(s.J, n1, n2);
    s.words = s.G->words_up_to(2);
    return s;
}

GroupWord random_word(const std::vector<GroupWord>& words, std::mt19937_64& rng) {
    return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
}

/// Equivariant rule from fixed forms: u(g_0,...,g_n) = wedge_i (alpha_i after g_i).
CochainRule synthetic_rule(const GroupSystemPtr& G, std::vector<DiffForm> alphas) {
    int m = 0;
    for (const auto& a : alphas) m += *a.degree();
    int n = static_cast<int>(alphas.size()) - 1;
    return CochainRule(n, m, G, [G, alphas](const std::vector<GroupWord>& words) {
        DiffForm r = DiffForm::scalar(G->chart(), GaussianRational(1));
        for (std::size_t i = 0; i < alphas.size(); ++i) r = wedge(r, pullback(G->eval(words[i]), alphas[i]));
        return r;
    });
}

std::vector<DiffForm> sample_forms(const Setup& s) {
    const HoloJetPtr& J = s.J;
    auto v = [&](SymId sym, int e = 1) { return Coefficient::var(J->chart, sym, e); };
    DiffForm dz = DiffForm::generator(J->chart, J->dz);
    DiffForm dzb = DiffForm::generator(J->chart, J->dzb);
    DiffForm dt = DiffForm::generator(J->chart, J->dt);
    return {
        dz * v(J->z, -1),
        dt * (v(J->w) * v(J->z)) + dz,
        wedge(dz, dzb) * v(J->zb),
        DiffForm(J->chart, v(J->z) * v(J->w, -1)),
        dzb * v(J->zb, -1) - dt * GaussianRational::i(),
    };
}

}  // namespace

TEST_CASE("simplicial differential", "[cochain]") {
    Setup s = setup(2, 1);
    Metric flat = Metric::flat(s.J);
    CochainRule omega = connection_rule(s.G, flat);

    // (delta omega)(g0, g1) = omega(g0) - omega(g1)
    CochainRule d1 = delta_simplicial(omega);
    GroupWord g0 = GroupWord::gen(0), g1 = GroupWord::gen(1);
    REQUIRE(d1({g0, g1}) == omega({g0}) - omega({g1}));

    // constant 0-cochain of degree 0 dies
    CochainRule unit = unit_cochain(s.G);
    REQUIRE(delta_simplicial(unit)({g0, g1}).is_zero());

    // delta after delta vanishes on random tuples
    std::mt19937_64 rng(71);
    CochainRule dd = delta_simplicial(d1);
    CochainRule ddd = delta_simplicial(dd);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<GroupWord> tuple;
        for (int i = 0; i < 4; ++i) tuple.push_back(random_word(s.words, rng));
        REQUIRE(ddd(tuple).is_zero());
    }
}

TEST_CASE("de rham differential on cochains", "[cochain]") {
    Setup s = setup();
    Metric flat = Metric::flat(s.J);
    CochainRule omega = connection_rule(s.G, flat);
    GroupWord g0 = GroupWord::gen(0);

    // (d omega)(g0) = d(omega(g0))
    REQUIRE(d_cochain(omega)({g0}) == exterior_d(omega({g0})));

    // closed-valued rules die
    DiffForm closed = wedge(DiffForm::generator(s.J->chart, s.J->dz), DiffForm::generator(s.J->chart, s.J->dzb));
    CochainRule c = included_form(s.G, closed, 2);
    REQUIRE(d_cochain(c)({g0}).is_zero());

    // d delta + delta d = 0 on random tuples (mixed-rule sample)
    std::mt19937_64 rng(73);
    auto forms = sample_forms(s);
    for (int trial = 0; trial < 30; ++trial) {
        CochainRule u = synthetic_rule(s.G, {forms[trial % forms.size()], forms[(trial + 2) % forms.size()]});
        CochainRule anti = delta_simplicial(d_cochain(u)) + d_cochain(delta_simplicial(u));
        std::vector<GroupWord> tuple;
        for (int i = 0; i < u.n + 2; ++i) tuple.push_back(random_word(s.words, rng));
        REQUIRE(anti(tuple).is_zero());
        REQUIRE(d_cochain(d_cochain(u))(std::vector<GroupWord>(tuple.begin(), tuple.end() - 1)).is_zero());
    }
}

TEST_CASE("cochain product", "[cochain]") {
    Setup s = setup(1, -1);
    auto forms = sample_forms(s);
    std::mt19937_64 rng(79);

    // two (1,1) rules pick up the (-1)^{nq} sign
    CochainRule u = delta_simplicial(synthetic_rule(s.G, {forms[0]}));
    CochainRule v = delta_simplicial(synthetic_rule(s.G, {forms[4]}));
    GroupWord g0 = GroupWord::identity(), g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);
    REQUIRE(cochain_product(u, v)({g0, g1, g2}) == -wedge(u({g0, g1}), v({g1, g2})));

    // unit acts as identity
    CochainRule uv = cochain_product(unit_cochain(s.G), u);
    REQUIRE(uv({g0, g1}) == u({g0, g1}));

    // associativity on random triples of mixed bidegrees
    for (int trial = 0; trial < 12; ++trial) {
        CochainRule a = synthetic_rule(s.G, {forms[trial % 5]});
        CochainRule b = synthetic_rule(s.G, {forms[(trial + 1) % 5], forms[(trial + 2) % 5]});
        CochainRule c = synthetic_rule(s.G, {forms[(trial + 3) % 5]});
        CochainRule lhs = cochain_product(cochain_product(a, b), c);
        CochainRule rhs = cochain_product(a, cochain_product(b, c));
        std::vector<GroupWord> tuple;
        for (int i = 0; i <= lhs.n; ++i) tuple.push_back(random_word(s.words, rng));
        REQUIRE(lhs(tuple) == rhs(tuple));
    }
}

TEST_CASE("equivariance of constructed rules", "[cochain]") {
    Setup s = setup(2, -1);
    Metric fs = Metric::fubini_study(s.J);
    CochainRule omega = connection_rule(s.G, fs);
    auto curvs = equivariant_curvature(omega);
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        GroupWord g = random_word(s.words, rng);
        GroupWord a = random_word(s.words, rng), b = random_word(s.words, rng);
        REQUIRE(omega({a * g}) == pullback(s.G->eval(g), omega({a})));
        REQUIRE(curvs.simplicial({a * g, b * g}) == pullback(s.G->eval(g), curvs.simplicial({a, b})));
        REQUIRE(curvs.de_rham({a * g}) == pullback(s.G->eval(g), curvs.de_rham({a})));
    }
}

TEST_CASE("group cochain conversion", "[cochain]") {
    Setup s = setup(3, 1);
    Metric flat = Metric::flat(s.J);
    CochainRule omega = connection_rule(s.G, flat);
    CochainRule Om = delta_simplicial(omega);
    GroupWord g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);

    // n = 1: f(g) = u(g, 1)
    GroupCochain f1 = to_group_cochain(Om);
    REQUIRE(f1({g1}) == Om({g1, GroupWord::identity()}));
    // n = 2: f(g1, g2) = u(g1 g2, g2, 1)
    GroupCochain f2 = to_group_cochain(delta_simplicial(Om));
    REQUIRE(f2({g1, g2}) == delta_simplicial(Om)({g1 * g2, g2, GroupWord::identity()}));

    // identity tuple
    REQUIRE(f2({GroupWord::identity(), GroupWord::identity()}) ==
            delta_simplicial(Om)({GroupWord::identity(), GroupWord::identity(), GroupWord::identity()}));

    // round trips on sampled tuples
    std::mt19937_64 rng(89);
    CochainRule back = from_group_cochain(to_group_cochain(Om));
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<GroupWord> tuple{random_word(s.words, rng), random_word(s.words, rng)};
        REQUIRE(back(tuple) == Om(tuple));
    }
    auto forms = sample_forms(s);
    CochainRule u1 = synthetic_rule(s.G, {forms[0], forms[3]});
    GroupCochain fwd = to_group_cochain(from_group_cochain(to_group_cochain(u1)));
    GroupCochain direct = to_group_cochain(u1);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<GroupWord> tuple{random_word(s.words, rng)};
        REQUIRE(fwd(tuple) == direct(tuple));
    }

    // the induced coboundary matches the displayed inhomogeneous formula up to
    // the (-1)^m twist of the simplicial differential
    for (const CochainRule& u : {omega, Om}) {
        GroupCochain lhs = to_group_cochain(delta_simplicial(u));
        GroupCochain rhs = group_coboundary(to_group_cochain(u));
        int sign = (u.m % 2 == 0) ? 1 : -1;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<GroupWord> tuple;
            for (int i = 0; i <= u.n; ++i) tuple.push_back(random_word(s.words, rng));
            DiffForm r = rhs(tuple);
            REQUIRE(lhs(tuple) == (sign > 0 ? r : -r));
        }
    }
}
