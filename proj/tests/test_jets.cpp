#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "jetforms/jets.hpp"

using namespace jetforms;

TEST_CASE("theta examples", "[jets]") {
    // n = 1: theta = y^-1 dx
    {
        JetBundlePtr J = full_jet(1, 1);
        SymId y = J->chart->find_symbol("y1_1");
        REQUIRE(theta(*J, 0) == J->dx(0) * Coefficient::var(J->chart, y, -1));
    }
    // holomorphic chart: theta^z = (y^-1)^z_z dz + (y^-1)^z_t dt
    {
        HoloJetPtr J = holo_jet();
        DiffForm expected = DiffForm::generator(J->chart, J->dz) * Coefficient::var(J->chart, J->a, -1) -
                            DiffForm::generator(J->chart, J->dt) *
                                (Coefficient::var(J->chart, J->p) * Coefficient::var(J->chart, J->a, -1));
        REQUIRE(theta(*J, 0) == expected);
        // pullback by the identity prolongation fixes it
        REQUIRE(pullback(Substitution::identity(J->chart), theta(*J, 0)) == theta(*J, 0));
    }
    REQUIRE_THROWS_AS(theta(*full_jet(2, 1), 2), Error);
}

TEST_CASE("theta_conn examples", "[jets]") {
    // n = 1: dy/y - (y2/y^2) dx
    {
        JetBundlePtr J = full_jet(1, 2);
        auto y = Coefficient::var(J->chart, J->chart->find_symbol("y1_1"));
        auto y2 = Coefficient::var(J->chart, J->chart->find_symbol("y1_11"));
        DiffForm expected = exterior_d(y) * y.inverse() - J->dx(0) * (y2 * pow(y.inverse(), 2));
        REQUIRE(theta_conn(*J, 0, 0) == expected);
        REQUIRE(exterior_d(exterior_d(theta_conn(*J, 0, 0))).is_zero());
    }
    // holomorphic (z, z) entry: the displayed triangular-inverse formula
    {
        HoloJetPtr J = holo_jet();
        auto v = [&](SymId s, int e = 1) { return Coefficient::var(J->chart, s, e); };
        DiffForm dz = DiffForm::generator(J->chart, J->dz);
        DiffForm dt = DiffForm::generator(J->chart, J->dt);
        DiffForm dyz_z = exterior_d(v(J->a));
        DiffForm expected = dyz_z * v(J->a, -1) -
                            wedge(DiffForm(J->chart, v(J->azz) * v(J->a, -1)),
                                  dz * v(J->a, -1) - dt * (v(J->p) * v(J->a, -1))) -
                            dt * (v(J->azt) * v(J->a, -1));
        REQUIRE(theta_conn(*J, 0, 0) == expected);
        REQUIRE(exterior_d(exterior_d(theta_conn(*J, 0, 0))).is_zero());
    }
    // every theta^i_j satisfies d(d(theta)) = 0 on the full n = 2 chart
    {
        JetBundlePtr J = full_jet(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) REQUIRE(exterior_d(exterior_d(theta_conn(*J, i, j))).is_zero());
    }
}

TEST_CASE("curvature horizontality", "[jets]") {
    // n = 1: R = d theta (theta wedge theta = 0), proportional to dx
    {
        JetBundlePtr J = full_jet(1, 2);
        REQUIRE(curvature(*J, 0, 0) == exterior_d(theta_conn(*J, 0, 0)));
        REQUIRE(curvature(*J, 0, 0).kill_forms(J->base_diffs).is_zero());
        REQUIRE(!curvature(*J, 0, 0).is_zero());
    }
    // killing all base differentials annihilates R^i_j
    for (int n : {2, 3}) {
        JetBundlePtr J = full_jet(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) REQUIRE(curvature(*J, i, j).kill_forms(J->base_diffs).is_zero());
    }
    {
        HoloJetPtr J = holo_jet();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) REQUIRE(curvature(*J, i, j).kill_forms(J->base_diffs).is_zero());
        // mixed entry vanishes on the holomorphic chart
        REQUIRE(curvature(*J, 0, 1).is_zero());
        REQUIRE(curvature(*J, 1, 0).is_zero());
        // t-row vanishes entirely
        for (int j = 0; j < 3; ++j) REQUIRE(curvature(*J, 2, j).is_zero());
        // R^z_z involves only base factors wedged against jet differentials
        REQUIRE(!wedge(curvature(*J, 0, 0), curvature(*J, 0, 0)).is_zero());
    }
}

TEST_CASE("inverse contraction reduces to the kronecker delta", "[jets]") {
    for (int n : {2, 3}) {
        JetBundlePtr J = full_jet(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Coefficient sum(J->chart, GaussianRational(0));
                for (int mu = 0; mu < n; ++mu) sum += J->yinv[i][mu] * J->y[mu][j];
                REQUIRE(sum == Coefficient(J->chart, GaussianRational(i == j ? 1 : 0)));
            }
    }
}

TEST_CASE("contraction rewriting terminates on random monomials", "[jets]") {
    JetBundlePtr J = full_jet(3, 2);
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(J->chart->symbols.size()) - 1);
    for (int trial = 0; trial < 200; ++trial) {
        Monomial m;
        int nf = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int f = 0; f < nf; ++f) m = m * Monomial::var(static_cast<SymId>(pick(rng)), 1);
        Poly p = Poly::term(m, GaussianRational(1));
        Poly reduced = J->chart->reduce(p);       // must terminate
        REQUIRE(J->chart->reduce(reduced) == reduced);  // and be a fixpoint
    }
}

TEST_CASE("chern-weil morphism", "[jets]") {
    WeilPtr alg = WeilAlgebra::get(3);
    JetBundlePtr J = full_jet(3, 2);

    // generator images
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            REQUIRE(chern_weil(WeilElement::connection(alg, i, j), *J) == theta_conn(*J, i, j));
            REQUIRE(chern_weil(WeilElement::curvature(alg, i, j), *J) == curvature(*J, i, j));
        }

    // intertwines the differentials on every generator (Bianchi identity on
    // the curvature side)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            REQUIRE(chern_weil(d_weil(WeilElement::connection(alg, i, j)), *J) ==
                    exterior_d(theta_conn(*J, i, j)));
            REQUIRE(chern_weil(d_weil(WeilElement::curvature(alg, i, j)), *J) ==
                    exterior_d(curvature(*J, i, j)));
        }

    REQUIRE_THROWS_AS(chern_weil(WeilElement::connection(WeilAlgebra::get(2), 0, 0), *J), Error);
}

TEST_CASE("chern-weil intertwines d on random low-degree elements", "[jets]") {
    WeilPtr alg = WeilAlgebra::get(3);
    std::mt19937_64 rng(67);
    std::uniform_int_distribution<int> idx(0, 2);
    auto OM = [&]() { return WeilElement::curvature(alg, idx(rng), idx(rng)); };
    auto om = [&]() { return WeilElement::connection(alg, idx(rng), idx(rng)); };
    auto random_shape = [&](int shape) {
        WeilElement a = WeilElement::scalar(alg, GaussianRational(std::uniform_int_distribution<long>(-3, 3)(rng)));
        switch (shape) {
            case 0: a = a * om() * om(); break;                 // degree 2
            case 1: a = a * OM() * om(); break;                 // degree 3
            case 2: a = a * OM() * OM(); break;                 // degree 4
            case 3: a = a * om() * om() * OM(); break;          // degree 4
            default: a = a * om() * om() * om() * om(); break;  // degree 4
        }
        return a;
    };
    // all shapes up to degree 4 on the restricted n = 3 chart
    {
        HoloJetPtr J = holo_jet();
        for (int trial = 0; trial < 15; ++trial) {
            WeilElement a = random_shape(std::uniform_int_distribution<int>(0, 4)(rng));
            REQUIRE(chern_weil(d_weil(a), *J) == exterior_d(chern_weil(a, *J)));
        }
    }
    // light shapes on the generic chart, where curvature entries are large
    {
        JetBundlePtr J = full_jet(3, 2);
        for (int shape : {0, 0, 1}) {
            WeilElement a = random_shape(shape);
            REQUIRE(chern_weil(d_weil(a), *J) == exterior_d(chern_weil(a, *J)));
        }
    }
}

TEST_CASE("high curvature products vanish by horizontality", "[jets]") {
    // n = 2: any product of three curvature entries dies
    {
        JetBundlePtr J = full_jet(2, 2);
        DiffForm r = wedge(wedge(curvature(*J, 0, 0), curvature(*J, 1, 1)), curvature(*J, 0, 1));
        REQUIRE(r.is_zero());
        r = wedge(wedge(curvature(*J, 0, 0), curvature(*J, 0, 0)), curvature(*J, 0, 0));
        REQUIRE(r.is_zero());
    }
    // holomorphic chart: four factors die
    {
        HoloJetPtr J = holo_jet();
        DiffForm rr = wedge(curvature(*J, 0, 0), curvature(*J, 1, 1));
        REQUIRE(wedge(rr, rr).is_zero());
    }
}

TEST_CASE("p1 restriction identity on the holomorphic chart", "[jets]") {
    HoloJetPtr J = holo_jet();
    REQUIRE(p1_identity_check(*J));
    // (R^z_t)-cross terms are absent: R^z_t R^t_z has a vanishing factor
    REQUIRE(curvature(*J, 2, 0).is_zero());
    REQUIRE(wedge(curvature(*J, 0, 2), curvature(*J, 2, 0)).is_zero());
}

TEST_CASE("theta + conjugate is so2-basic", "[jets]") {
    HoloJetPtr J = holo_jet();
    DiffForm sum = theta_conn(*J, 0, 0) + theta_conn(*J, 1, 1);

    // contraction with the rotation vertical field vanishes
    VectorField rot = rotation_field(*J);
    REQUIRE(interior_product(rot, sum).is_zero());
    REQUIRE(!interior_product(rot, theta_conn(*J, 0, 0)).is_zero());

    // invariance under the finite rotation substitution
    RotationAction act = rotation_action(J);
    REQUIRE(pullback(act.rotation, sum) == pullback(act.inclusion, sum));

    // each summand shifts by the circle term, which cancels in the sum
    DiffForm shift = pullback(act.rotation, theta_conn(*J, 0, 0)) - pullback(act.inclusion, theta_conn(*J, 0, 0));
    DiffForm dalpha = DiffForm::generator(act.extended->chart, act.extended->chart->symbols[act.alpha].diff);
    REQUIRE(shift == dalpha * GaussianRational::i());

    // theta^zb_zb is the conjugate of theta^z_z
    REQUIRE(conj(theta_conn(*J, 0, 0)) == theta_conn(*J, 1, 1));
}
