#ifndef JETFORMS_SUBST_HPP
#define JETFORMS_SUBST_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "jetforms/form.hpp"

namespace jetforms {

/// Symbol-wise substitution from one chart into another (or itself).
/// Forms pull back through it: differentials of substituted expressions are
/// computed by the chain rule in the target chart.
class Substitution {
public:
    ChartPtr src, dst;
    std::vector<Coefficient> images;  // per src commuting symbol

    Substitution() = default;
    Substitution(ChartPtr from, ChartPtr to) : src(std::move(from)), dst(std::move(to)) {
        images.assign(src->symbols.size(), Coefficient(dst, GaussianRational(0)));
    }

    static Substitution identity(const ChartPtr& ch) {
        Substitution s(ch, ch);
        for (SymId i = 0; i < ch->symbols.size(); ++i) s.images[i] = Coefficient::var(ch, i);
        return s;
    }

    void set(SymId s, Coefficient image) {
        if (image.chart != dst) throw Error("substitution image lives in the wrong chart");
        images.at(s) = std::move(image);
    }
    const Coefficient& image(SymId s) const { return images.at(s); }

    bool is_identity() const {
        if (src != dst) return false;
        for (SymId i = 0; i < src->symbols.size(); ++i)
            if (images[i] != Coefficient::var(src, i)) return false;
        return true;
    }

    Coefficient apply(const Poly& p) const {
        Coefficient r(dst, GaussianRational(0));
        for (const auto& [m, c] : p.terms) {
            Coefficient t(dst, c);
            for (const auto& [id, e] : m.factors) {
                const Coefficient& img = images.at(id);
                if (e < 0) {
                    std::string why;
                    auto inv = img.try_inverse(&why);
                    if (!inv)
                        throw Error("substitution: image of '" + src->symbol_name(id) +
                                    "' is not invertible: " + why);
                    t *= pow(*inv, -e);
                } else {
                    t *= pow(img, e);
                }
            }
            r += t;
        }
        return r;
    }

    Coefficient apply(const Coefficient& c) const {
        if (c.chart != src) throw Error("substitution applied to a coefficient from another chart");
        Coefficient r = apply(c.num);
        for (const auto& [i, e] : c.den) {
            Coefficient q = apply(src->invertible_polys.at(i).poly);
            std::string why;
            auto inv = q.try_inverse(&why);
            if (!inv)
                throw Error("substitution: denominator '" + src->invertible_polys.at(i).name +
                            "' maps to a non-declared denominator: " + why);
            r *= pow(*inv, e);
        }
        return r;
    }

    friend bool operator==(const Substitution& a, const Substitution& b) {
        return a.src == b.src && a.dst == b.dst && a.images == b.images;
    }
    friend bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }
    friend bool operator<(const Substitution& a, const Substitution& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        return std::lexicographical_compare(a.images.begin(), a.images.end(), b.images.begin(), b.images.end());
    }
};

/// g after f: apply f first, then g (images of f evaluated under g).
inline Substitution compose(const Substitution& f, const Substitution& g) {
    if (f.dst != g.src) throw Error("substitution composition: chart mismatch");
    Substitution r(f.src, g.dst);
    for (SymId i = 0; i < f.src->symbols.size(); ++i) r.images[i] = g.apply(f.images[i]);
    return r;
}

/// Pullback of a form: algebra morphism commuting with the exterior differential.
inline DiffForm pullback(const Substitution& g, const DiffForm& a) {
    if (a.chart != g.src) throw Error("pullback: form lives on '" + a.chart->name + "', substitution expects '" +
                                      g.src->name + "'");
    std::unordered_map<FormId, DiffForm> dcache;
    auto pb_generator = [&](FormId f) -> const DiffForm& {
        auto it = dcache.find(f);
        if (it != dcache.end()) return it->second;
        const auto& fs = g.src->form_symbols.at(f);
        if (fs.of == kNoSym)
            throw Error("pullback: free 1-form symbol '" + fs.name + "' has no substitution image");
        DiffForm d = exterior_d(g.image(fs.of));
        return dcache.emplace(f, std::move(d)).first->second;
    };
    DiffForm r(g.dst);
    for (const auto& [mono, c] : a.terms) {
        DiffForm t(g.dst, g.apply(c));
        for (FormId f : mono.factors) {
            if (t.is_zero()) break;
            t = wedge(t, pb_generator(f));
        }
        r += t;
    }
    return r;
}

/// Formal conjugation: antilinear ring involution. Symbols map by their
/// declared conjugation (fixed, partner, or reciprocal for circle symbols).
inline Coefficient conj(const Coefficient& c) {
    const ChartPtr& ch = c.chart;
    Coefficient r(ch, GaussianRational(0));
    for (const auto& [m, k] : c.num.terms) {
        Coefficient t(ch, k.conj());
        for (const auto& [id, e] : m.factors) {
            const auto& sym = ch->symbols.at(id);
            switch (sym.conj_kind) {
                case ConjKind::self: t *= Coefficient::var(ch, id, e); break;
                case ConjKind::partner: t *= Coefficient::var(ch, sym.conj, e); break;
                case ConjKind::reciprocal: t *= Coefficient::var(ch, id, -e); break;
            }
        }
        r += t;
    }
    for (const auto& [i, e] : c.den) {
        Coefficient q(ch, GaussianRational(0));
        for (const auto& [m, k] : ch->invertible_polys.at(i).poly.terms) {
            Coefficient t(ch, k.conj());
            for (const auto& [id, ex] : m.factors) {
                const auto& sym = ch->symbols.at(id);
                switch (sym.conj_kind) {
                    case ConjKind::self: t *= Coefficient::var(ch, id, ex); break;
                    case ConjKind::partner: t *= Coefficient::var(ch, sym.conj, ex); break;
                    case ConjKind::reciprocal: t *= Coefficient::var(ch, id, -ex); break;
                }
            }
            q += t;
        }
        r *= pow(q.inverse(), e);
    }
    return r;
}

/// Conjugation of forms: conj(dx) is the differential of conj(x).
inline DiffForm conj(const DiffForm& a) {
    const ChartPtr& ch = a.chart;
    DiffForm r(ch);
    for (const auto& [mono, c] : a.terms) {
        DiffForm t(ch, conj(c));
        for (FormId f : mono.factors) {
            const auto& fs = ch->form_symbols.at(f);
            if (fs.of == kNoSym) throw Error("conjugation: free 1-form symbol '" + fs.name + "'");
            const auto& sym = ch->symbols.at(fs.of);
            DiffForm df(ch);
            switch (sym.conj_kind) {
                case ConjKind::self: df = detail::d_symbol(ch, fs.of); break;
                case ConjKind::partner: df = detail::d_symbol(ch, sym.conj); break;
                case ConjKind::reciprocal: {
                    // d(u^-1) = -u^-2 du
                    df = detail::d_symbol(ch, fs.of) * Coefficient::var(ch, fs.of, -2);
                    df = -df;
                    break;
                }
            }
            t = wedge(t, df);
        }
        r += t;
    }
    return r;
}

}  // namespace jetforms

#endif
