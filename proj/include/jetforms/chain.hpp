#ifndef JETFORMS_CHAIN_HPP
#define JETFORMS_CHAIN_HPP

#include "jetforms/anomaly.hpp"

namespace jetforms {

struct ChainFactor {
    enum class Kind { circle, interval };
    Kind kind = Kind::circle;
    std::string name;
    Rational lower{0}, upper{0};  // intervals only

    friend bool operator==(const ChainFactor& a, const ChainFactor& b) {
        return a.kind == b.kind && a.name == b.name && a.lower == b.lower && a.upper == b.upper;
    }
};

/// Current given by integration over a product of circles and intervals,
/// embedded in the base through expressions in the parameter symbols.
/// A chain whose embedding uses fewer parameters than its dimension is a
/// null current: every pairing with it vanishes by rank, and it is kept in
/// formal sums in a canonical embedding-free state so that like terms cancel.
class ParamChain {
public:
    HoloJetPtr J;
    std::vector<ChainFactor> factors;
    ChartPtr pchart;
    std::vector<SymId> coords;  // coordinate symbol per factor
    std::vector<SymId> units;   // circle unit symbol per factor (kNoSym for intervals)
    std::map<SymId, Coefficient> embedding;  // images of z, zb, t, w
    int orientation = 1;
    bool null_current = false;

    int dimension() const { return static_cast<int>(factors.size()); }

    static ParamChain make(const HoloJetPtr& J, std::vector<ChainFactor> factors,
                           const std::function<std::map<SymId, Coefficient>(const ParamChain&)>& embed,
                           int orientation = 1) {
        ParamChain c;
        c.J = J;
        c.factors = std::move(factors);
        c.pchart = build_param_chart(c.factors);
        c.coords.resize(c.factors.size());
        c.units.assign(c.factors.size(), kNoSym);
        for (std::size_t i = 0; i < c.factors.size(); ++i) {
            c.coords[i] = c.pchart->find_symbol(c.factors[i].name);
            if (c.factors[i].kind == ChainFactor::Kind::circle)
                c.units[i] = c.pchart->find_symbol("u_" + c.factors[i].name);
        }
        c.orientation = orientation;
        c.embedding = embed(c);
        c.check_embedding();
        c.declare_denominator_images();
        c.canonicalize_rank();
        return c;
    }

    Coefficient param_var(std::size_t factor, int e = 1) const {
        return Coefficient::var(pchart, factors[factor].kind == ChainFactor::Kind::circle ? units[factor]
                                                                                          : coords[factor],
                                e);
    }
    Coefficient param_coord(std::size_t factor) const { return Coefficient::var(pchart, coords[factor]); }

    /// Substitution of the embedding into base expressions (jets unassigned).
    Substitution base_substitution() const {
        if (null_current) throw Error("param chain: null current has no embedding");
        Substitution S(J->chart, pchart);
        for (const auto& [s, img] : embedding) S.set(s, img);
        return S;
    }

    bool mentions_only_embedded(const DiffForm& a, std::string* offender = nullptr) const {
        for (const auto& [mono, c] : a.terms) {
            for (FormId f : mono.factors) {
                SymId of = J->chart->form_symbols.at(f).of;
                if (of == kNoSym || !embedding.count(of)) {
                    if (offender) *offender = J->chart->form_name(f);
                    return false;
                }
            }
            for (SymId s = 0; s < J->chart->symbols.size(); ++s)
                if (!embedding.count(s) && c.mentions(s)) {
                    if (offender) *offender = J->chart->symbol_name(s);
                    return false;
                }
        }
        return true;
    }

    friend bool operator==(const ParamChain& a, const ParamChain& b) {
        if (a.pchart != b.pchart || a.factors != b.factors || a.null_current != b.null_current) return false;
        if (a.null_current) return true;  // null currents of one shape are the zero current
        return a.orientation == b.orientation && a.embedding == b.embedding;
    }

    std::string key() const {
        std::string k = pchart->name + "#" + std::to_string(orientation);
        if (null_current) return k + "#null";
        for (const auto& [s, img] : embedding) k += "|" + to_string(img);
        return k;
    }

private:
    void check_embedding() const {
        auto it = embedding.find(J->z);
        auto itb = embedding.find(J->zb);
        if (it != embedding.end() && itb != embedding.end() && conj(it->second) != itb->second)
            throw Error("param chain: zb-image is not the conjugate of the z-image");
    }

    /// Images of base denominators (e.g. 1 + z zb on a solid chain) become
    /// declared invertibles of the parameter chart, so pullbacks stay rational.
    void declare_denominator_images() {
        auto mutable_chart = std::const_pointer_cast<Chart>(pchart);
        Substitution S(J->chart, pchart);
        for (const auto& [s, img] : embedding) S.set(s, img);
        for (const auto& ip : J->chart->invertible_polys) {
            Coefficient img;
            try {
                img = S.apply(ip.poly);
            } catch (const Error&) {
                continue;
            }
            if (img.is_zero() || !img.den.empty()) continue;
            if (img.try_inverse()) continue;  // already a unit times a monomial
            Monomial content = img.num.content_monomial();
            Poly core = img.num.multiply_monomial(content.inverse());
            bool known = false;
            for (const auto& existing : mutable_chart->invertible_polys)
                if (existing.poly == core) known = true;
            if (!known) mutable_chart->add_invertible_poly("img_" + ip.name, core);
        }
    }

    void canonicalize_rank() {
        int active = 0;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            bool used = false;
            for (const auto& [s, img] : embedding) {
                if (img.mentions(coords[i])) used = true;
                if (units[i] != kNoSym && img.mentions(units[i])) used = true;
            }
            if (used) ++active;
        }
        if (active < dimension()) {
            null_current = true;
            embedding.clear();
        }
    }

    /// Parameter charts are interned by their factor signature so that equal
    /// chains built along different paths share a chart pointer.
    static ChartPtr build_param_chart(const std::vector<ChainFactor>& factors) {
        std::string signature = "params";
        for (const auto& f : factors)
            signature += (f.kind == ChainFactor::Kind::circle ? ".S1_" : ".I_") + f.name;
        thread_local std::map<std::string, ChartPtr> interned;
        auto it = interned.find(signature);
        if (it != interned.end()) return it->second;
        auto ch = std::make_shared<Chart>(signature);
        for (const auto& f : factors) {
            SymId c = ch->add_symbol(f.name, SymbolKind::coordinate);
            if (f.kind == ChainFactor::Kind::circle) {
                SymId u = ch->add_symbol("u_" + f.name, SymbolKind::circle, false);
                ch->set_invertible(u);
                ch->set_conj_reciprocal(u);
                RuleForm du;
                du.push_back({Poly::term(Monomial::var(u), GaussianRational::i()), {ch->symbols[c].diff}});
                ch->set_diff_rule(u, du);
            } else {
                // pushforwards may invert interval coordinates away from the
                // bounds (poles at a bound become null faces); the exact
                // integral rejects any surviving negative power
                ch->set_invertible(c);
            }
        }
        interned.emplace(signature, ch);
        return interned[signature];
    }

public:
    /// Face of an interval factor at one of its bounds, with the factor
    /// removed. A bound outside the embedding's domain (a pole) produces the
    /// null current of the face shape.
    ParamChain face(std::size_t factor, bool upper) const {
        if (factors.at(factor).kind != ChainFactor::Kind::interval)
            throw Error("param chain: circle factors have no faces");
        std::vector<ChainFactor> sub_factors;
        for (std::size_t i = 0; i < factors.size(); ++i)
            if (i != factor) sub_factors.push_back(factors[i]);
        ParamChain f;
        f.J = J;
        f.factors = std::move(sub_factors);
        f.pchart = build_param_chart(f.factors);
        f.coords.resize(f.factors.size());
        f.units.assign(f.factors.size(), kNoSym);
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            f.coords[i] = f.pchart->find_symbol(f.factors[i].name);
            if (f.factors[i].kind == ChainFactor::Kind::circle)
                f.units[i] = f.pchart->find_symbol("u_" + f.factors[i].name);
        }
        f.orientation = orientation;
        if (null_current) {
            f.null_current = true;
            return f;
        }
        // substitute the bound for the removed coordinate, renumber the rest
        Substitution S(pchart, f.pchart);
        Rational bound = upper ? factors[factor].upper : factors[factor].lower;
        for (std::size_t i = 0, fi = 0; i < factors.size(); ++i) {
            if (i == factor) {
                S.set(coords[i], Coefficient(f.pchart, GaussianRational(bound)));
                continue;
            }
            S.set(coords[i], Coefficient::var(f.pchart, f.coords[fi]));
            if (units[i] != kNoSym) S.set(units[i], Coefficient::var(f.pchart, f.units[fi]));
            ++fi;
        }
        try {
            for (const auto& [s, img] : embedding) f.embedding[s] = S.apply(img);
        } catch (const Error&) {
            // the image escapes the chart at this bound; the face is the
            // null current of its shape
            f.embedding.clear();
            f.null_current = true;
            return f;
        }
        f.declare_denominator_images();
        f.canonicalize_rank();
        return f;
    }
};

/// The solid cylinder |z| <= 1 inside the product of the circle and the
/// sphere: factors (r, phi, t) with z = r u_phi; positively oriented for the
/// (t, x, y) orientation of the base.
inline ParamChain cylinder_chain(const HoloJetPtr& J) {
    std::vector<ChainFactor> f{{ChainFactor::Kind::interval, "r", Rational(0), Rational(1)},
                               {ChainFactor::Kind::circle, "phi", 0, 0},
                               {ChainFactor::Kind::circle, "tau", 0, 0}};
    return ParamChain::make(J, std::move(f), [&](const ParamChain& c) {
        std::map<SymId, Coefficient> e;
        e[J->z] = c.param_coord(0) * c.param_var(1);
        e[J->zb] = c.param_coord(0) * c.param_var(1, -1);
        e[J->t] = c.param_coord(2);
        e[J->w] = c.param_var(2);
        return e;
    });
}

/// The torus |z| = 1: factors (t, phi) with z = u_phi.
inline ParamChain torus_chain(const HoloJetPtr& J) {
    std::vector<ChainFactor> f{{ChainFactor::Kind::circle, "tau", 0, 0},
                               {ChainFactor::Kind::circle, "phi", 0, 0}};
    return ParamChain::make(J, std::move(f), [&](const ParamChain& c) {
        std::map<SymId, Coefficient> e;
        e[J->z] = c.param_var(1);
        e[J->zb] = c.param_var(1, -1);
        e[J->t] = c.param_coord(0);
        e[J->w] = c.param_var(0);
        return e;
    });
}

/// Point at z = 1, t = 0.
inline ParamChain point_chain(const HoloJetPtr& J) {
    return ParamChain::make(J, {}, [&](const ParamChain& c) {
        std::map<SymId, Coefficient> e;
        e[J->z] = Coefficient(c.pchart, GaussianRational(1));
        e[J->zb] = Coefficient(c.pchart, GaussianRational(1));
        e[J->t] = Coefficient(c.pchart, GaussianRational(0));
        e[J->w] = Coefficient(c.pchart, GaussianRational(1));
        return e;
    });
}

/// Faces of the de Rham boundary with their orientation signs:
/// interval factor i contributes (-1)^(i-1) (upper - lower).
inline std::vector<std::pair<int, ParamChain>> boundary_faces(const ParamChain& c) {
    std::vector<std::pair<int, ParamChain>> out;
    int sign = 1;
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        if (c.factors[i].kind == ChainFactor::Kind::interval) {
            out.emplace_back(sign, c.face(i, true));
            out.emplace_back(-sign, c.face(i, false));
        }
        sign = -sign;
    }
    return out;
}

/// Pushforward by a group word: the embedding is composed with the action.
inline ParamChain pushforward(const GroupSystemPtr& G, const GroupWord& g, const ParamChain& c) {
    if (c.null_current) return c;
    ParamChain r = c;
    const Substitution& S = G->eval(g);
    Substitution E = c.base_substitution();
    std::map<SymId, Coefficient> img;
    for (const auto& [s, old] : c.embedding) {
        try {
            img[s] = E.apply(S.image(s));
        } catch (const Error& e) {
            throw Error(std::string("pushforward: ") + e.what());
        }
    }
    r.embedding = std::move(img);
    // orientation preserved: the action is by orientation-preserving maps
    return r;
}

/// Formal sum of terms g_1 x ... x g_n x chain with exact coefficients.
class ChainElement {
public:
    struct Term {
        GaussianRational coeff;
        std::vector<GroupWord> words;
        ParamChain chain;
    };
    GroupSystemPtr G;
    std::vector<Term> terms;

    explicit ChainElement(GroupSystemPtr sys) : G(std::move(sys)) {}

    static ChainElement single(const GroupSystemPtr& G, std::vector<GroupWord> words, ParamChain chain,
                               GaussianRational coeff = GaussianRational(1)) {
        ChainElement e(G);
        e.add(std::move(coeff), std::move(words), std::move(chain));
        return e;
    }

    bool empty() const { return terms.empty(); }

    void add(GaussianRational coeff, std::vector<GroupWord> words, ParamChain chain) {
        if (coeff.is_zero()) return;
        // like terms merge by substitution ids and chain value
        std::vector<int> ids = G->tuple_ids(words);
        for (auto& t : terms) {
            if (G->tuple_ids(t.words) == ids && t.chain == chain) {
                t.coeff += coeff;
                if (t.coeff.is_zero()) {
                    terms.erase(terms.begin() + (&t - terms.data()));
                }
                return;
            }
        }
        terms.push_back({std::move(coeff), std::move(words), std::move(chain)});
    }

    friend ChainElement operator+(const ChainElement& a, const ChainElement& b) {
        ChainElement r = a;
        for (const auto& t : b.terms) r.add(t.coeff, t.words, t.chain);
        return r;
    }
    friend ChainElement operator-(const ChainElement& a) {
        ChainElement r = a;
        for (auto& t : r.terms) t.coeff = -t.coeff;
        return r;
    }
    friend ChainElement operator-(const ChainElement& a, const ChainElement& b) { return a + (-b); }
};

/// delta(g_1 x ... x g_n x C) = g_2 x ... x C
///   + sum_{i=1}^{n-1} (-1)^i g_1 x ... x g_i g_{i+1} x ... x C
///   + (-1)^n g_1 x ... x g_{n-1} x (g_n C)
inline ChainElement delta_homology(const ChainElement& e) {
    ChainElement r(e.G);
    for (const auto& t : e.terms) {
        int n = static_cast<int>(t.words.size());
        if (n == 0) continue;
        {
            std::vector<GroupWord> rest(t.words.begin() + 1, t.words.end());
            r.add(t.coeff, std::move(rest), t.chain);
        }
        int sign = -1;
        for (int i = 1; i <= n - 1; ++i) {
            std::vector<GroupWord> merged;
            merged.reserve(n - 1);
            for (int j = 0; j < n; ++j) {
                if (j == i - 1) {
                    merged.push_back(t.words[j] * t.words[j + 1]);
                    ++j;
                } else {
                    merged.push_back(t.words[j]);
                }
            }
            r.add(sign > 0 ? t.coeff : -t.coeff, std::move(merged), t.chain);
            sign = -sign;
        }
        {
            std::vector<GroupWord> head(t.words.begin(), t.words.end() - 1);
            GaussianRational c = (n % 2 == 0) ? t.coeff : -t.coeff;
            r.add(std::move(c), std::move(head), pushforward(e.G, t.words.back(), t.chain));
        }
    }
    return r;
}

/// partial(g_1 x ... x g_n x C) = (-1)^n g_1 x ... x g_n x (boundary of C)
inline ChainElement partial_homology(const ChainElement& e) {
    ChainElement r(e.G);
    for (const auto& t : e.terms) {
        int n = static_cast<int>(t.words.size());
        GaussianRational base = (n % 2 == 0) ? t.coeff : -t.coeff;
        for (auto& [sign, face] : boundary_faces(t.chain))
            r.add(sign > 0 ? base : -base, t.words, std::move(face));
    }
    return r;
}

/// c = g1 x g2 x dC + (g2 - g1 - g1 g2) x C over the solid cylinder.
inline ChainElement build_cycle(const GroupSystemPtr& G) {
    if (G->gens.size() < 2) throw Error("cycle: two generators are required");
    const HoloJetPtr& J = G->J;
    ParamChain C = cylinder_chain(J);
    GroupWord g1 = GroupWord::gen(0), g2 = GroupWord::gen(1);
    ChainElement c(G);
    for (auto& [sign, face] : boundary_faces(C))
        c.add(GaussianRational(sign), {g1, g2}, std::move(face));
    c.add(GaussianRational(1), {g2}, C);
    c.add(GaussianRational(-1), {g1}, C);
    c.add(GaussianRational(-1), {g1 * g2}, C);
    return c;
}

/// Chains agree after a declared reparameterization of the parameters (with
/// its orientation sign); null currents of one shape are always equal.
inline bool equal_up_to_reparam(const ParamChain& a, const ParamChain& b, const Substitution& reparam,
                                int reparam_sign = 1) {
    if (a.pchart != b.pchart || !(a.factors == b.factors)) return false;
    if (a.null_current || b.null_current) return a.null_current == b.null_current;
    if (a.orientation * reparam_sign != b.orientation) return false;
    for (const auto& [s, img] : a.embedding) {
        auto it = b.embedding.find(s);
        if (it == b.embedding.end()) return false;
        if (reparam.apply(img) != it->second) return false;
    }
    return a.embedding.size() == b.embedding.size();
}

}  // namespace jetforms

#endif
