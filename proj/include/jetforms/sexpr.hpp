#ifndef JETFORMS_SEXPR_HPP
#define JETFORMS_SEXPR_HPP

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "jetforms/form.hpp"

namespace jetforms {

/// Minimal s-expression tree: an atom or a list.
struct Sexpr {
    std::string atom;
    std::vector<Sexpr> items;
    bool is_atom = false;

    Sexpr() = default;
    static Sexpr make_atom(std::string s) {
        Sexpr e;
        e.atom = std::move(s);
        e.is_atom = true;
        return e;
    }
    static Sexpr list(std::vector<Sexpr> xs = {}) {
        Sexpr e;
        e.items = std::move(xs);
        return e;
    }
    Sexpr& push(Sexpr e) {
        items.push_back(std::move(e));
        return *this;
    }
    Sexpr& push_atom(std::string s) { return push(make_atom(std::move(s))); }

    const Sexpr& at(std::size_t i) const {
        if (is_atom || i >= items.size()) throw Error("sexpr: index out of range");
        return items[i];
    }
    std::size_t size() const { return items.size(); }
    const std::string& as_atom() const {
        if (!is_atom) throw Error("sexpr: expected atom");
        return atom;
    }
    bool head_is(const std::string& h) const {
        return !is_atom && !items.empty() && items[0].is_atom && items[0].atom == h;
    }

    void print(std::ostream& os) const {
        if (is_atom) {
            os << atom;
            return;
        }
        os << '(';
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) os << ' ';
            items[i].print(os);
        }
        os << ')';
    }
    std::string str() const {
        std::ostringstream os;
        print(os);
        return os.str();
    }
};

namespace sexpr {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ';')) {
        if (s[i] == ';') {
            while (i < s.size() && s[i] != '\n') ++i;
        } else {
            ++i;
        }
    }
}

inline Sexpr parse_at(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    if (i >= s.size()) throw Error("sexpr: unexpected end of input");
    if (s[i] == '(') {
        ++i;
        Sexpr e = Sexpr::list();
        while (true) {
            skip_ws(s, i);
            if (i >= s.size()) throw Error("sexpr: missing ')'");
            if (s[i] == ')') {
                ++i;
                return e;
            }
            e.push(parse_at(s, i));
        }
    }
    if (s[i] == ')') throw Error("sexpr: unexpected ')'");
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')') ++i;
    return Sexpr::make_atom(s.substr(start, i - start));
}

inline Sexpr parse(const std::string& s) {
    std::size_t i = 0;
    Sexpr e = parse_at(s, i);
    skip_ws(s, i);
    if (i != s.size()) throw Error("sexpr: trailing input");
    return e;
}

// ---- scalars ----

inline Sexpr of(const Rational& q) {
    std::ostringstream os;
    os << q;
    return Sexpr::make_atom(os.str());
}

inline Rational to_rational(const Sexpr& e) { return Rational(e.as_atom()); }

inline Sexpr of(const GaussianRational& g) {
    if (g.im == 0) return of(g.re);
    return Sexpr::list().push_atom("c").push(of(g.re)).push(of(g.im));
}

inline GaussianRational to_gaussian(const Sexpr& e) {
    if (e.is_atom) return GaussianRational(to_rational(e));
    if (!e.head_is("c") || e.size() != 3) throw Error("sexpr: expected gaussian rational");
    return {to_rational(e.at(1)), to_rational(e.at(2))};
}

// ---- polynomials and coefficients (names resolved through a chart) ----

inline Sexpr of(const Monomial& m, const Chart& ch) {
    Sexpr e = Sexpr::list().push_atom("m");
    for (const auto& [id, ex] : m.factors)
        e.push(Sexpr::list().push_atom(ch.symbol_name(id)).push_atom(std::to_string(ex)));
    return e;
}

inline Monomial to_monomial(const Sexpr& e, const Chart& ch) {
    if (!e.head_is("m")) throw Error("sexpr: expected monomial");
    Monomial m;
    for (std::size_t i = 1; i < e.size(); ++i) {
        SymId s = ch.find_symbol(e.at(i).at(0).as_atom());
        int ex = std::stoi(e.at(i).at(1).as_atom());
        m = m * Monomial::var(s, ex);
    }
    return m;
}

inline Sexpr of(const Poly& p, const Chart& ch) {
    Sexpr e = Sexpr::list().push_atom("p");
    for (const auto& [m, c] : p.terms) e.push(Sexpr::list().push(of(c)).push(of(m, ch)));
    return e;
}

inline Poly to_poly(const Sexpr& e, const Chart& ch) {
    if (!e.head_is("p")) throw Error("sexpr: expected polynomial");
    Poly p;
    for (std::size_t i = 1; i < e.size(); ++i)
        p.add_term(to_monomial(e.at(i).at(1), ch), to_gaussian(e.at(i).at(0)));
    return p;
}

inline Sexpr of(const Coefficient& c) {
    Sexpr e = Sexpr::list().push_atom("k").push(of(c.num, *c.chart));
    if (!c.den.empty()) {
        Sexpr d = Sexpr::list().push_atom("den");
        for (const auto& [i, ex] : c.den)
            d.push(Sexpr::list().push_atom(c.chart->invertible_polys.at(i).name).push_atom(std::to_string(ex)));
        e.push(std::move(d));
    }
    return e;
}

inline Coefficient to_coefficient(const Sexpr& e, const ChartPtr& ch) {
    if (!e.head_is("k")) throw Error("sexpr: expected coefficient");
    Coefficient c(ch);
    c.num = to_poly(e.at(1), *ch);
    if (e.size() > 2) {
        const Sexpr& d = e.at(2);
        if (!d.head_is("den")) throw Error("sexpr: expected denominator list");
        for (std::size_t i = 1; i < d.size(); ++i)
            c.den[ch->find_invertible_poly(d.at(i).at(0).as_atom())] = std::stoi(d.at(i).at(1).as_atom());
    }
    c.normalize();
    return c;
}

inline Sexpr of(const DiffForm& a) {
    Sexpr e = Sexpr::list().push_atom("f");
    for (const auto& [m, c] : a.terms) {
        Sexpr w = Sexpr::list().push_atom("w");
        for (FormId f : m.factors) w.push_atom(a.chart->form_name(f));
        e.push(Sexpr::list().push(of(c)).push(std::move(w)));
    }
    return e;
}

inline DiffForm to_form(const Sexpr& e, const ChartPtr& ch) {
    if (!e.head_is("f")) throw Error("sexpr: expected form");
    DiffForm a(ch);
    for (std::size_t i = 1; i < e.size(); ++i) {
        Coefficient c = to_coefficient(e.at(i).at(0), ch);
        const Sexpr& w = e.at(i).at(1);
        if (!w.head_is("w")) throw Error("sexpr: expected wedge list");
        FormMono m;
        for (std::size_t j = 1; j < w.size(); ++j) m.factors.push_back(ch->find_form(w.at(j).as_atom()));
        a.add_term(m, c);
    }
    return a;
}

// ---- charts ----

inline const char* kind_name(SymbolKind k) {
    switch (k) {
        case SymbolKind::coordinate: return "coordinate";
        case SymbolKind::jet: return "jet";
        case SymbolKind::circle: return "circle";
        case SymbolKind::auxiliary: return "auxiliary";
    }
    return "auxiliary";
}

inline SymbolKind kind_from(const std::string& s) {
    if (s == "coordinate") return SymbolKind::coordinate;
    if (s == "jet") return SymbolKind::jet;
    if (s == "circle") return SymbolKind::circle;
    if (s == "auxiliary") return SymbolKind::auxiliary;
    throw Error("sexpr: unknown symbol kind '" + s + "'");
}

inline Sexpr rule_to_sexpr(const RuleForm& rule, const Chart& ch) {
    Sexpr e = Sexpr::list().push_atom("terms");
    for (const RuleTerm& t : rule) {
        Sexpr w = Sexpr::list().push_atom("w");
        for (FormId f : t.wedge) w.push_atom(ch.form_name(f));
        e.push(Sexpr::list().push(of(t.coeff, ch)).push(std::move(w)));
    }
    return e;
}

inline RuleForm rule_from_sexpr(const Sexpr& e, const Chart& ch) {
    RuleForm rule;
    for (std::size_t i = 1; i < e.size(); ++i) {
        RuleTerm t;
        t.coeff = to_poly(e.at(i).at(0), ch);
        const Sexpr& w = e.at(i).at(1);
        for (std::size_t j = 1; j < w.size(); ++j) t.wedge.push_back(ch.find_form(w.at(j).as_atom()));
        rule.push_back(std::move(t));
    }
    return rule;
}

/// Chart layout convention: commuting symbols first (basic differentials
/// auto-created in declaration order), then free 1-form symbols.
inline Sexpr of(const Chart& ch) {
    Sexpr e = Sexpr::list().push_atom("chart").push_atom(ch.name);
    for (const auto& s : ch.symbols) {
        Sexpr se = Sexpr::list().push_atom("sym").push_atom(s.name).push_atom(kind_name(s.kind));
        if (s.diff != kNoForm) se.push_atom("diff");
        if (s.invertible) se.push_atom("inv");
        if (s.conj_kind == ConjKind::reciprocal) se.push_atom("recip");
        if (s.conj_kind == ConjKind::partner)
            se.push(Sexpr::list().push_atom("conj").push_atom(ch.symbol_name(s.conj)));
        e.push(std::move(se));
    }
    for (const auto& f : ch.form_symbols)
        if (f.of == kNoSym) e.push(Sexpr::list().push_atom("free-form").push_atom(f.name));
    for (const auto& ip : ch.invertible_polys)
        e.push(Sexpr::list().push_atom("invpoly").push_atom(ip.name).push(of(ip.poly, ch)));
    for (SymId s = 0; s < ch.symbols.size(); ++s)
        if (ch.symbols[s].has_rule)
            e.push(Sexpr::list().push_atom("drule").push_atom(ch.symbol_name(s)).push(
                rule_to_sexpr(ch.diff_rules.at(s), ch)));
    for (FormId f = 0; f < ch.form_symbols.size(); ++f)
        if (ch.form_symbols[f].has_rule)
            e.push(Sexpr::list().push_atom("frule").push_atom(ch.form_name(f)).push(
                rule_to_sexpr(ch.form_diff_rules.at(f), ch)));
    for (const auto& r : ch.contractions)
        e.push(Sexpr::list()
                   .push_atom("contraction")
                   .push_atom(ch.symbol_name(r.lead_a))
                   .push_atom(ch.symbol_name(r.lead_b))
                   .push(of(r.rhs, ch)));
    return e;
}

inline std::shared_ptr<Chart> to_chart(const Sexpr& e) {
    if (!e.head_is("chart")) throw Error("sexpr: expected chart");
    auto ch = std::make_shared<Chart>(e.at(1).as_atom());
    // two passes: declare symbols first so rules and conjugations can resolve names
    for (std::size_t i = 2; i < e.size(); ++i) {
        const Sexpr& se = e.at(i);
        if (se.head_is("sym")) {
            bool with_diff = false;
            for (std::size_t j = 3; j < se.size(); ++j)
                if (se.at(j).is_atom && se.at(j).as_atom() == "diff") with_diff = true;
            SymId id = ch->add_symbol(se.at(1).as_atom(), kind_from(se.at(2).as_atom()), with_diff);
            for (std::size_t j = 3; j < se.size(); ++j) {
                const Sexpr& flag = se.at(j);
                if (flag.is_atom && flag.as_atom() == "inv") ch->set_invertible(id);
                if (flag.is_atom && flag.as_atom() == "recip") ch->set_conj_reciprocal(id);
            }
        } else if (se.head_is("free-form")) {
            ch->add_free_form(se.at(1).as_atom());
        }
    }
    for (std::size_t i = 2; i < e.size(); ++i) {
        const Sexpr& se = e.at(i);
        if (se.head_is("sym")) {
            SymId id = ch->find_symbol(se.at(1).as_atom());
            for (std::size_t j = 3; j < se.size(); ++j) {
                const Sexpr& flag = se.at(j);
                if (!flag.is_atom && flag.head_is("conj")) {
                    SymId other = ch->find_symbol(flag.at(1).as_atom());
                    if (id < other) ch->set_conj_pair(id, other);
                }
            }
        } else if (se.head_is("invpoly")) {
            ch->add_invertible_poly(se.at(1).as_atom(), to_poly(se.at(2), *ch));
        } else if (se.head_is("drule")) {
            ch->set_diff_rule(ch->find_symbol(se.at(1).as_atom()), rule_from_sexpr(se.at(2), *ch));
        } else if (se.head_is("frule")) {
            ch->set_form_diff_rule(ch->find_form(se.at(1).as_atom()), rule_from_sexpr(se.at(2), *ch));
        } else if (se.head_is("contraction")) {
            ContractionRule r;
            r.lead_a = ch->find_symbol(se.at(1).as_atom());
            r.lead_b = ch->find_symbol(se.at(2).as_atom());
            r.rhs = to_poly(se.at(3), *ch);
            ch->add_contraction(std::move(r));
        }
    }
    return ch;
}

inline bool same_content(const Chart& a, const Chart& b) {
    if (a.name != b.name || a.symbols.size() != b.symbols.size() ||
        a.form_symbols.size() != b.form_symbols.size())
        return false;
    return of(a).str() == of(b).str();
}

}  // namespace sexpr

inline std::string to_string(const Coefficient& c) { return sexpr::of(c).str(); }
inline std::string to_string(const DiffForm& a) { return sexpr::of(a).str(); }

}  // namespace jetforms

#endif
