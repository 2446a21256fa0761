#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jetforms/integrate.hpp"

using namespace jetforms;

namespace {

struct Setup {
    HoloJetPtr J;
    GroupSystemPtr G;
};

Setup setup(int n1 = 1, int n2 = 0) {
    Setup s;
    s.J = holo_jet();
    s.G = inversion_pair(s.J, n1, n2);
    return s;
}

}  // namespace

TEST_CASE("boundary of presets", "[chain]") {
    Setup s = setup();
    ParamChain C = cylinder_chain(s.J);
    REQUIRE(C.dimension() == 3);
    REQUIRE(!C.null_current);

    auto faces = boundary_faces(C);
    REQUIRE(faces.size() == 2);
    REQUIRE(faces[0].first == 1);   // upper face r = 1
    REQUIRE(faces[1].first == -1);  // lower face r = 0
    const ParamChain& upper = faces[0].second;
    const ParamChain& lower = faces[1].second;
    REQUIRE(upper.dimension() == 2);
    REQUIRE(!upper.null_current);
    // upper face embeds z as the unit circle
    REQUIRE(upper.embedding.at(s.J->z) == upper.param_var(0));
    // lower face is constant in z: a degenerate (null) face, retained
    REQUIRE(lower.null_current);

    // the torus has no boundary, nor does a point
    REQUIRE(boundary_faces(torus_chain(s.J)).empty());
    REQUIRE(boundary_faces(point_chain(s.J)).empty());
}

TEST_CASE("pushforward", "[chain]") {
    Setup s = setup(2, 0);
    GroupWord g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);
    ParamChain T = torus_chain(s.J);

    REQUIRE(pushforward(s.G, GroupWord::identity(), T) == T);

    // z -> w^2/z on the torus: embedding becomes w^2 u^-1 (with w = u_tau)
    ParamChain gT = pushforward(s.G, g1, T);
    Coefficient expected = Coefficient::var(T.pchart, T.units[0], 2) * Coefficient::var(T.pchart, T.units[1], -1);
    REQUIRE(gT.embedding.at(s.J->z) == expected);

    // g1 g2 on C equals g1 applied after g2
    ParamChain C = cylinder_chain(s.J);
    REQUIRE(pushforward(s.G, g1 * g2, C) == pushforward(s.G, g1, pushforward(s.G, g2, C)));

    // a null face stays null under pushforward
    ParamChain lower = boundary_faces(C)[1].second;
    REQUIRE(pushforward(s.G, g1, lower).null_current);
}

TEST_CASE("homology differentials", "[chain]") {
    Setup s = setup(1, 0);
    GroupWord g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);
    ParamChain C = cylinder_chain(s.J);
    ParamChain T = torus_chain(s.J);

    // delta(g x C) = C - gC
    {
        ChainElement e = ChainElement::single(s.G, {g1}, C);
        ChainElement d = delta_homology(e);
        ChainElement expected = ChainElement::single(s.G, {}, C) - ChainElement::single(s.G, {}, pushforward(s.G, g1, C));
        REQUIRE((d - expected).empty());
    }
    // delta(g1 x g2 x C) = g2 x C - g1g2 x C + g1 x g2 C
    {
        ChainElement e = ChainElement::single(s.G, {g1, g2}, T);
        ChainElement d = delta_homology(e);
        ChainElement expected = ChainElement::single(s.G, {g2}, T) -
                                ChainElement::single(s.G, {g1 * g2}, T) +
                                ChainElement::single(s.G, {g1}, pushforward(s.G, g2, T));
        REQUIRE((d - expected).empty());
    }
    // partial signs: partial(g1 x g2 x C) = +g1 x g2 x dC, partial(g x C) = -g x dC
    {
        ChainElement e2 = ChainElement::single(s.G, {g1, g2}, C);
        ChainElement p2 = partial_homology(e2);
        ChainElement expected2(s.G);
        for (auto& [sign, face] : boundary_faces(C))
            expected2.add(GaussianRational(sign), {g1, g2}, std::move(face));
        REQUIRE((p2 - expected2).empty());

        ChainElement e1 = ChainElement::single(s.G, {g1}, C);
        ChainElement p1 = partial_homology(e1);
        ChainElement expected1(s.G);
        for (auto& [sign, face] : boundary_faces(C))
            expected1.add(GaussianRational(-sign), {g1}, std::move(face));
        REQUIRE((p1 - expected1).empty());
    }
}

TEST_CASE("bicomplex identities on random chain elements", "[chain]") {
    Setup s = setup(2, -1);
    std::mt19937_64 rng(101);
    std::vector<GroupWord> words = s.G->words_up_to(2);
    auto random_word = [&]() {
        return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    };
    std::vector<ParamChain> chains{cylinder_chain(s.J), torus_chain(s.J),
                                   pushforward(s.G, GroupWord::gen(0), cylinder_chain(s.J))};
    for (int trial = 0; trial < 30; ++trial) {
        const ParamChain& ch = chains[trial % chains.size()];
        int n = std::uniform_int_distribution<int>(0, 2)(rng);
        std::vector<GroupWord> tuple;
        for (int i = 0; i < n; ++i) tuple.push_back(random_word());
        ChainElement e = ChainElement::single(s.G, tuple, ch);

        REQUIRE(delta_homology(delta_homology(e)).empty());
        REQUIRE(partial_homology(partial_homology(e)).empty());
        ChainElement anti = partial_homology(delta_homology(e)) + delta_homology(partial_homology(e));
        REQUIRE(anti.empty());
    }
}

TEST_CASE("cycle relations", "[chain]") {
    for (auto [n1, n2] : std::vector<std::pair<int, int>>{{1, 0}, {2, -1}, {0, 0}}) {
        Setup s = setup(n1, n2);
        GroupWord g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);
        ParamChain C = cylinder_chain(s.J);
        ParamChain T = boundary_faces(C)[0].second;  // the r = 1 torus face
        auto basis = standard_test_basis(s.J);

        // g_i dC = -dC weakly against the basis
        for (const GroupWord& g : {g1, g2}) {
            ChainElement dC(s.G);
            for (auto& [sign, face] : boundary_faces(C)) dC.add(GaussianRational(sign), {}, std::move(face));
            ChainElement pushed(s.G);
            for (const auto& t : dC.terms) pushed.add(t.coeff, {}, pushforward(s.G, g, t.chain));
            std::string why;
            REQUIRE(weak_zero_against_basis(pushed + dC, basis, &why));
        }

        // g_i dC = -dC also exactly, up to the orientation-reversing shear
        // phi -> n_i tau - phi on the (phi, tau) torus face
        for (int gi : {0, 1}) {
            int n = gi == 0 ? n1 : n2;
            ParamChain gT = pushforward(s.G, GroupWord::gen(gi), T);
            Substitution R(T.pchart, T.pchart);
            // factor 0 is phi, factor 1 is tau
            Coefficient phi_img = Coefficient::var(T.pchart, T.coords[1]) * GaussianRational(n) -
                                  Coefficient::var(T.pchart, T.coords[0]);
            R.set(T.coords[0], phi_img);
            R.set(T.units[0],
                  Coefficient::var(T.pchart, T.units[1], n) * Coefficient::var(T.pchart, T.units[0], -1));
            R.set(T.coords[1], Coefficient::var(T.pchart, T.coords[1]));
            R.set(T.units[1], Coefficient::var(T.pchart, T.units[1]));
            ParamChain mT = T;
            mT.orientation = -T.orientation;
            REQUIRE(equal_up_to_reparam(gT, mT, R, -1));
        }

        // g1 g2 C = C exactly up to the torus shear phi -> phi + (n1 - n2) tau
        {
            ParamChain gC = pushforward(s.G, g1 * g2, C);
            Substitution R(C.pchart, C.pchart);
            R.set(C.coords[0], Coefficient::var(C.pchart, C.coords[0]));  // r
            Coefficient phi_img = Coefficient::var(C.pchart, C.coords[1]) +
                                  Coefficient::var(C.pchart, C.coords[2]) * GaussianRational(n1 - n2);
            R.set(C.coords[1], phi_img);
            R.set(C.units[1],
                  Coefficient::var(C.pchart, C.units[1]) * Coefficient::var(C.pchart, C.units[2], n1 - n2));
            R.set(C.coords[2], Coefficient::var(C.pchart, C.coords[2]));
            R.set(C.units[2], Coefficient::var(C.pchart, C.units[2]));
            REQUIRE(equal_up_to_reparam(C, gC, R, +1));
        }

        // weak cycle condition: (partial + delta) c pairs to zero on the basis
        ChainElement c = build_cycle(s.G);
        ChainElement dc = partial_homology(c) + delta_homology(c);
        std::string why;
        REQUIRE(weak_zero_against_basis(dc, basis, &why));
    }
}
