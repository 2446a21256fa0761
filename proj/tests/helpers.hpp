#ifndef JETFORMS_TESTS_HELPERS_HPP
#define JETFORMS_TESTS_HELPERS_HPP

#include <memory>
#include <random>

#include "jetforms/form.hpp"
#include "jetforms/subst.hpp"

namespace jetforms::testing {

/// Base coordinates of the product of a circle and a Riemann surface:
/// z, zb, t, plus the unit-circle symbol w over t (dw = i w dt) and the
/// declared invertible 1 + z*zb.
struct BaseChart {
    ChartPtr ch;
    SymId z, zb, t, w;
    FormId dz, dzb, dt;
    int fs;
};

inline BaseChart make_base_chart() {
    auto c = std::make_shared<Chart>("base");
    BaseChart b;
    b.z = c->add_symbol("z", SymbolKind::coordinate);
    b.zb = c->add_symbol("zb", SymbolKind::coordinate);
    b.t = c->add_symbol("t", SymbolKind::coordinate);
    b.w = c->add_symbol("w", SymbolKind::circle, false);
    c->set_invertible(b.z);
    c->set_invertible(b.zb);
    c->set_invertible(b.w);
    c->set_conj_pair(b.z, b.zb);
    c->set_conj_reciprocal(b.w);
    b.fs = c->add_invertible_poly("one_plus_zzb", Poly(1) + Poly::var(b.z) * Poly::var(b.zb));
    // dw = i w dt
    RuleForm dw;
    dw.push_back({Poly::term(Monomial::var(b.w), GaussianRational::i()), {c->symbols[b.t].diff}});
    c->set_diff_rule(b.w, dw);
    b.ch = c;
    b.dz = b.ch->symbols[b.z].diff;
    b.dzb = b.ch->symbols[b.zb].diff;
    b.dt = b.ch->symbols[b.t].diff;
    return b;
}

/// Random coefficient with small Laurent monomials in the chart's invertible
/// symbols and polynomial dependence elsewhere.
inline Coefficient random_coefficient(const ChartPtr& ch, std::mt19937_64& rng, int max_terms = 3,
                                      bool allow_negative = true) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(ch->symbols.size()) - 1);
    std::uniform_int_distribution<int> expo(0, 2);
    std::uniform_int_distribution<long> coeff(-5, 5);
    std::uniform_int_distribution<int> img(0, 1);
    Poly p;
    int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        Monomial m;
        int nf = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int f = 0; f < nf; ++f) {
            SymId s = static_cast<SymId>(pick(rng));
            int e = expo(rng);
            if (allow_negative && ch->symbols[s].invertible && std::uniform_int_distribution<int>(0, 3)(rng) == 0)
                e = -e;
            m = m * Monomial::var(s, e);
        }
        GaussianRational c{Rational(coeff(rng)), img(rng) ? Rational(coeff(rng)) : Rational(0)};
        p.add_term(m, c);
    }
    return Coefficient(ch, p);
}

/// Random form of homogeneous degree `deg` over the chart's 1-form symbols.
inline DiffForm random_form(const ChartPtr& ch, std::mt19937_64& rng, int deg, int max_terms = 3,
                            bool allow_negative = true) {
    DiffForm a(ch);
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(ch->form_symbols.size()) - 1);
    int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        std::vector<FormId> factors;
        while (static_cast<int>(factors.size()) < deg) {
            FormId f = static_cast<FormId>(pick(rng));
            bool dup = false;
            for (FormId g : factors) dup |= (g == f);
            if (!dup) factors.push_back(f);
        }
        std::sort(factors.begin(), factors.end());
        a.add_term(FormMono{factors}, random_coefficient(ch, rng, 2, allow_negative));
    }
    return a;
}

}  // namespace jetforms::testing

#endif
