#ifndef JETFORMS_FORM_HPP
#define JETFORMS_FORM_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "jetforms/coefficient.hpp"

namespace jetforms {

/// Ordered wedge of distinct anticommuting generators.
struct FormMono {
    std::vector<FormId> factors;  // strictly increasing

    int degree() const { return static_cast<int>(factors.size()); }
    bool is_scalar() const { return factors.empty(); }

    friend bool operator==(const FormMono& a, const FormMono& b) { return a.factors == b.factors; }
    friend bool operator!=(const FormMono& a, const FormMono& b) { return !(a == b); }
    friend bool operator<(const FormMono& a, const FormMono& b) {
        if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
        return a.factors < b.factors;
    }

    /// Merge two ordered wedges; returns the sign, or 0 on a repeated factor.
    static int merge(const FormMono& a, const FormMono& b, FormMono& out) {
        out.factors.clear();
        out.factors.reserve(a.factors.size() + b.factors.size());
        std::size_t i = 0, j = 0;
        int sign = 1;
        while (i < a.factors.size() && j < b.factors.size()) {
            if (a.factors[i] < b.factors[j]) {
                out.factors.push_back(a.factors[i++]);
            } else if (b.factors[j] < a.factors[i]) {
                if ((a.factors.size() - i) % 2 == 1) sign = -sign;
                out.factors.push_back(b.factors[j++]);
            } else {
                return 0;
            }
        }
        while (i < a.factors.size()) out.factors.push_back(a.factors[i++]);
        while (j < b.factors.size()) out.factors.push_back(b.factors[j++]);
        return sign;
    }
};

/// Element of the graded-commutative algebra of differential forms over a chart.
/// Terms are kept in normal form: coefficients normalized, wedge factors in
/// chart declaration order with signs absorbed, no zero coefficients.
/// Equality is representation equality.
class DiffForm {
public:
    ChartPtr chart;
    std::map<FormMono, Coefficient> terms;

    DiffForm() = default;
    explicit DiffForm(ChartPtr ch) : chart(std::move(ch)) {}
    DiffForm(ChartPtr ch, Coefficient c) : chart(std::move(ch)) {
        if (!c.is_zero()) terms.emplace(FormMono{}, std::move(c));
    }

    static DiffForm scalar(const ChartPtr& ch, GaussianRational c) {
        return DiffForm(ch, Coefficient(ch, std::move(c)));
    }
    static DiffForm generator(const ChartPtr& ch, FormId f, Coefficient c) {
        DiffForm a(ch);
        a.add_term(FormMono{{f}}, std::move(c));
        return a;
    }
    static DiffForm generator(const ChartPtr& ch, FormId f) {
        return generator(ch, f, Coefficient(ch, GaussianRational(1)));
    }

    bool is_zero() const { return terms.empty(); }

    void add_term(const FormMono& m, const Coefficient& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    /// Degree when homogeneous, nothing otherwise; the zero form reports 0.
    std::optional<int> degree() const {
        if (terms.empty()) return 0;
        int d = terms.begin()->first.degree();
        for (const auto& [m, c] : terms)
            if (m.degree() != d) return std::nullopt;
        return d;
    }

    Coefficient coefficient_of(const FormMono& m) const {
        auto it = terms.find(m);
        if (it == terms.end()) return Coefficient(chart, GaussianRational(0));
        return it->second;
    }
    Coefficient scalar_part() const { return coefficient_of(FormMono{}); }

    bool mentions_form(FormId f) const {
        for (const auto& [m, c] : terms)
            for (FormId g : m.factors)
                if (g == f) return true;
        return false;
    }

    static void require_same_chart(const DiffForm& a, const DiffForm& b, const char* op) {
        if (a.chart != b.chart)
            throw Error(std::string(op) + ": chart mismatch between '" + (a.chart ? a.chart->name : "<none>") +
                        "' and '" + (b.chart ? b.chart->name : "<none>") + "'");
    }

    friend DiffForm operator+(const DiffForm& a, const DiffForm& b) {
        if (a.terms.empty()) return b;
        if (b.terms.empty()) return a;
        require_same_chart(a, b, "form addition");
        DiffForm r = a;
        for (const auto& [m, c] : b.terms) r.add_term(m, c);
        return r;
    }
    friend DiffForm operator-(const DiffForm& a) {
        DiffForm r(a.chart);
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
        return r;
    }
    friend DiffForm operator-(const DiffForm& a, const DiffForm& b) { return a + (-b); }
    DiffForm& operator+=(const DiffForm& b) { return *this = *this + b; }
    DiffForm& operator-=(const DiffForm& b) { return *this = *this - b; }

    friend DiffForm operator*(const DiffForm& a, const Coefficient& c) {
        DiffForm r(a.chart);
        for (const auto& [m, k] : a.terms) r.add_term(m, k * c);
        return r;
    }
    friend DiffForm operator*(const DiffForm& a, const GaussianRational& c) {
        DiffForm r(a.chart);
        for (const auto& [m, k] : a.terms) r.add_term(m, k * c);
        return r;
    }

    friend bool operator==(const DiffForm& a, const DiffForm& b) { return a.chart == b.chart && a.terms == b.terms; }
    friend bool operator!=(const DiffForm& a, const DiffForm& b) { return !(a == b); }
    friend bool operator<(const DiffForm& a, const DiffForm& b) {
        return std::lexicographical_compare(
            a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(), [](const auto& x, const auto& y) {
                if (!(x.first == y.first)) return x.first < y.first;
                return x.second < y.second;
            });
    }

    /// Kill the listed 1-form generators (substitute 0); used for horizontality
    /// checks where all base differentials are set to zero.
    DiffForm kill_forms(const std::vector<FormId>& killed) const {
        DiffForm r(chart);
        for (const auto& [m, c] : terms) {
            bool dead = false;
            for (FormId f : m.factors)
                for (FormId k : killed)
                    if (f == k) {
                        dead = true;
                        break;
                    }
            if (!dead) r.add_term(m, c);
        }
        return r;
    }
};

/// Graded-commutative product.
inline DiffForm wedge(const DiffForm& a, const DiffForm& b) {
    DiffForm::require_same_chart(a, b, "wedge");
    DiffForm r(a.chart);
    FormMono merged;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            int sign = FormMono::merge(ma, mb, merged);
            if (sign == 0) continue;
            Coefficient c = ca * cb;
            if (sign < 0) c = -c;
            r.add_term(merged, c);
        }
    return r;
}

namespace detail {

inline DiffForm materialize_rule(const ChartPtr& ch, const RuleForm& rule) {
    DiffForm r(ch);
    for (const RuleTerm& t : rule) r.add_term(FormMono{t.wedge}, Coefficient(ch, t.coeff));
    return r;
}

/// d of a commuting symbol: its basic 1-form, or the declared rule.
/// Materialized once per chart; charts are immutable once forms are built.
inline const DiffForm& d_symbol(const ChartPtr& ch, SymId s) {
    thread_local std::map<std::pair<const Chart*, SymId>, DiffForm> cache;
    thread_local std::vector<ChartPtr> pinned;  // keep cached charts alive
    auto key = std::make_pair(ch.get(), s);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const auto& sym = ch->symbols.at(s);
    DiffForm d;
    if (sym.diff != kNoForm)
        d = DiffForm::generator(ch, sym.diff);
    else if (sym.has_rule)
        d = materialize_rule(ch, ch->diff_rules.at(s));
    else
        throw Error("chart '" + ch->name + "': symbol '" + sym.name + "' has no differential rule");
    if (pinned.empty() || pinned.back() != ch) pinned.push_back(ch);
    return cache.emplace(key, std::move(d)).first->second;
}

/// d of a 1-form generator: zero for basic differentials, the declared 2-form
/// rule for free generators, otherwise an error naming the symbol.
inline DiffForm d_form_symbol(const ChartPtr& ch, FormId f) {
    const auto& fs = ch->form_symbols.at(f);
    if (fs.of != kNoSym) return DiffForm(ch);  // d(dx) = 0
    if (fs.has_rule) return materialize_rule(ch, ch->form_diff_rules.at(f));
    throw Error("chart '" + ch->name + "': 1-form symbol '" + fs.name + "' has no differential rule");
}

}  // namespace detail

/// d of a coefficient, as a 1-form (plus rule-degree corrections).
inline DiffForm exterior_d(const Coefficient& c) {
    const ChartPtr& ch = c.chart;
    DiffForm r(ch);
    std::vector<bool> seen(ch->symbols.size(), false);
    std::vector<SymId> appearing;
    auto gather = [&](const Poly& p) {
        for (const auto& [m, q] : p.terms)
            for (const auto& [id, e] : m.factors)
                if (!seen[id]) {
                    seen[id] = true;
                    appearing.push_back(id);
                }
    };
    gather(c.num);
    for (const auto& [i, e] : c.den) gather(ch->invertible_polys.at(i).poly);
    std::sort(appearing.begin(), appearing.end());
    for (SymId s : appearing) {
        Coefficient dc = c.partial(s);
        if (dc.is_zero()) continue;
        r += detail::d_symbol(ch, s) * dc;
    }
    return r;
}

/// Exterior differential: linear, Leibniz with the degree sign, d after d = 0.
inline DiffForm exterior_d(const DiffForm& a) {
    const ChartPtr& ch = a.chart;
    DiffForm r(ch);
    for (const auto& [mono, c] : a.terms) {
        DiffForm dc = exterior_d(c);
        if (!dc.is_zero()) {
            DiffForm tail(ch);
            tail.add_term(mono, Coefficient(ch, GaussianRational(1)));
            r += wedge(dc, tail);
        }
        // factor-by-factor differentials (free generators with rules), with the
        // explicit sign for passing d over the p preceding odd factors
        for (std::size_t p = 0; p < mono.factors.size(); ++p) {
            const auto& fs = ch->form_symbols.at(mono.factors[p]);
            if (fs.of != kNoSym || !fs.has_rule) continue;  // d(dx) = 0
            DiffForm df = detail::d_form_symbol(ch, mono.factors[p]);
            FormMono prefix{std::vector<FormId>(mono.factors.begin(), mono.factors.begin() + p)};
            FormMono suffix{std::vector<FormId>(mono.factors.begin() + p + 1, mono.factors.end())};
            DiffForm left(ch);
            left.add_term(prefix, p % 2 == 0 ? c : -c);
            DiffForm right(ch);
            right.add_term(suffix, Coefficient(ch, GaussianRational(1)));
            r += wedge(wedge(left, df), right);
        }
    }
    return r;
}

/// Vector field with components in the chart's commuting generators.
struct VectorField {
    ChartPtr chart;
    std::map<SymId, Coefficient> components;

    explicit VectorField(ChartPtr ch) : chart(std::move(ch)) {}
    void set(SymId s, Coefficient c) {
        if (s >= chart->symbols.size()) throw Error("vector field component for undeclared generator");
        if (!c.is_zero()) components[s] = std::move(c);
    }
    Coefficient component(SymId s) const {
        auto it = components.find(s);
        if (it == components.end()) return Coefficient(chart, GaussianRational(0));
        return it->second;
    }
};

/// Interior product (contraction): antiderivation of degree -1.
inline DiffForm interior_product(const VectorField& v, const DiffForm& a) {
    if (v.chart != a.chart)
        throw Error("interior product: chart mismatch between '" + v.chart->name + "' and '" + a.chart->name + "'");
    const ChartPtr& ch = a.chart;
    DiffForm r(ch);
    for (const auto& [mono, c] : a.terms) {
        int sign = 1;
        for (std::size_t p = 0; p < mono.factors.size(); ++p) {
            const auto& fs = ch->form_symbols.at(mono.factors[p]);
            if (fs.of != kNoSym) {
                Coefficient comp = v.component(fs.of);
                if (!comp.is_zero()) {
                    FormMono rest;
                    rest.factors.reserve(mono.factors.size() - 1);
                    for (std::size_t q = 0; q < mono.factors.size(); ++q)
                        if (q != p) rest.factors.push_back(mono.factors[q]);
                    Coefficient term = c * comp;
                    if (sign < 0) term = -term;
                    r.add_term(rest, term);
                }
            }
            sign = -sign;
        }
    }
    return r;
}

/// df/f for an invertible coefficient; logarithms never materialize.
inline DiffForm log_derivative(const Coefficient& f) {
    if (f.is_zero()) throw Error("log derivative of zero");
    Coefficient inv = f.inverse();
    return exterior_d(f) * inv;
}

}  // namespace jetforms

#endif
