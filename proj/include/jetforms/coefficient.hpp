#ifndef JETFORMS_COEFFICIENT_HPP
#define JETFORMS_COEFFICIENT_HPP

#include <map>
#include <optional>
#include <string>

#include "jetforms/chart.hpp"

namespace jetforms {

/// Rational expression over a chart: Laurent-polynomial numerator divided by a
/// product of the chart's declared invertible polynomials. Negative exponents
/// of invertible symbols live directly in the numerator monomials; polynomial
/// denominator factors are tracked by index with positive exponents.
/// Normal form: contraction-reduced numerator, shared factors cancelled,
/// zero represented by the empty numerator with empty denominator.
class Coefficient {
public:
    ChartPtr chart;
    Poly num;
    std::map<int, int> den;  // invertible-poly index -> exponent > 0

    Coefficient() = default;
    explicit Coefficient(ChartPtr ch) : chart(std::move(ch)) {}
    Coefficient(ChartPtr ch, Poly p) : chart(std::move(ch)), num(std::move(p)) { normalize(); }
    Coefficient(ChartPtr ch, GaussianRational c) : chart(std::move(ch)), num(std::move(c)) {}

    static Coefficient var(const ChartPtr& ch, SymId s, int e = 1) {
        if (e < 0 && !ch->symbols.at(s).invertible)
            throw Error("chart '" + ch->name + "': symbol '" + ch->symbol_name(s) + "' is not invertible");
        return Coefficient(ch, Poly::var(s, e));
    }

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.is_constant() && den.empty(); }
    GaussianRational constant_value() const { return num.constant_value(); }

    void normalize() {
        if (chart && chart->has_contractions()) num = chart->reduce(std::move(num));
        if (num.is_zero()) {
            den.clear();
            return;
        }
        for (auto it = den.begin(); it != den.end();) {
            const Poly& q = chart->invertible_polys.at(it->first).poly;
            while (it->second > 0) {
                auto quot = num.divide_exact(q);
                if (!quot) break;
                num = std::move(*quot);
                --it->second;
            }
            if (it->second == 0)
                it = den.erase(it);
            else
                ++it;
        }
    }

    static void require_same_chart(const Coefficient& a, const Coefficient& b, const char* op) {
        if (a.chart != b.chart)
            throw Error(std::string(op) + ": chart mismatch between '" + (a.chart ? a.chart->name : "<none>") +
                        "' and '" + (b.chart ? b.chart->name : "<none>") + "'");
    }

    friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        require_same_chart(a, b, "coefficient addition");
        Coefficient r(a.chart);
        // common denominator: max exponent per factor
        r.den = a.den;
        for (const auto& [i, e] : b.den) {
            auto it = r.den.find(i);
            if (it == r.den.end())
                r.den.emplace(i, e);
            else
                it->second = std::max(it->second, e);
        }
        Poly na = a.num, nb = b.num;
        for (const auto& [i, e] : r.den) {
            int ea = e, eb = e;
            if (auto it = a.den.find(i); it != a.den.end()) ea -= it->second;
            if (auto it = b.den.find(i); it != b.den.end()) eb -= it->second;
            const Poly& q = a.chart->invertible_polys.at(i).poly;
            for (int k = 0; k < ea; ++k) na *= q;
            for (int k = 0; k < eb; ++k) nb *= q;
        }
        r.num = na + nb;
        r.normalize();
        return r;
    }
    friend Coefficient operator-(const Coefficient& a) {
        Coefficient r = a;
        r.num = -r.num;
        return r;
    }
    friend Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }
    friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
        if (a.is_zero()) return a;
        if (b.is_zero()) return b;
        require_same_chart(a, b, "coefficient multiplication");
        Coefficient r(a.chart);
        r.num = a.num * b.num;
        r.den = a.den;
        for (const auto& [i, e] : b.den) r.den[i] += e;
        r.normalize();
        return r;
    }
    Coefficient& operator+=(const Coefficient& b) { return *this = *this + b; }
    Coefficient& operator-=(const Coefficient& b) { return *this = *this - b; }
    Coefficient& operator*=(const Coefficient& b) { return *this = *this * b; }

    friend Coefficient operator*(const Coefficient& a, const GaussianRational& c) {
        Coefficient r = a;
        r.num = r.num * c;
        if (r.num.is_zero()) r.den.clear();
        return r;
    }

    friend bool operator==(const Coefficient& a, const Coefficient& b) {
        return a.chart == b.chart && a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }
    friend bool operator<(const Coefficient& a, const Coefficient& b) {
        if (a.num != b.num) return a.num < b.num;
        return a.den < b.den;
    }

    /// Factor the coefficient as unit * monomial * prod(invertible_polys^k) when
    /// possible; the result is the multiplicative inverse. Fails (with the
    /// offending factor) when the numerator has a non-invertible polynomial part.
    std::optional<Coefficient> try_inverse(std::string* offending = nullptr) const {
        if (is_zero()) throw Error("coefficient inverse: division by zero");
        Monomial content = num.content_monomial();
        Poly core = num.multiply_monomial(content.inverse());
        std::map<int, int> poly_factors;
        bool progress = true;
        while (!core.is_constant() && progress) {
            progress = false;
            for (int i = 0; i < static_cast<int>(chart->invertible_polys.size()); ++i) {
                auto q = core.divide_exact(chart->invertible_polys[i].poly);
                if (q) {
                    core = std::move(*q);
                    Monomial c2 = core.content_monomial();
                    if (!c2.is_one()) {
                        content = content * c2;
                        core = core.multiply_monomial(c2.inverse());
                    }
                    ++poly_factors[i];
                    progress = true;
                }
            }
        }
        if (!core.is_constant()) {
            if (offending) {
                *offending = "(non-invertible factor with " + std::to_string(core.terms.size()) + " terms)";
                // name the symbols involved for the diagnostic
                std::string syms;
                for (const auto& [m, c] : core.terms)
                    for (const auto& [id, e] : m.factors) {
                        std::string n = chart->symbol_name(id);
                        if (syms.find(n) == std::string::npos) syms += (syms.empty() ? "" : ",") + n;
                    }
                *offending += " in symbols {" + syms + "}";
            }
            return std::nullopt;
        }
        for (const auto& [id, e] : content.factors)
            if (!chart->symbols.at(id).invertible) {
                if (offending) *offending = "symbol '" + chart->symbol_name(id) + "' is not declared invertible";
                return std::nullopt;
            }
        // inverse: den factors move to the numerator, numerator factors to den
        Coefficient r(chart);
        r.num = Poly::term(content.inverse(), core.constant_value().inverse());
        for (const auto& [i, e] : den) {
            Poly p = chart->invertible_polys.at(i).poly;
            for (int k = 0; k < e; ++k) r.num *= p;
        }
        r.den = poly_factors;
        r.normalize();
        return r;
    }

    Coefficient inverse() const {
        std::string why;
        auto r = try_inverse(&why);
        if (!r) throw Error("chart '" + chart->name + "': coefficient not invertible: " + why);
        return *r;
    }
    friend Coefficient operator/(const Coefficient& a, const Coefficient& b) { return a * b.inverse(); }

    /// Partial derivative with respect to a commuting symbol (quotient rule over
    /// the declared denominator factors).
    Coefficient partial(SymId s) const {
        Coefficient r(chart);
        r.num = num.partial(s);
        r.den = den;
        r.normalize();
        for (const auto& [i, e] : den) {
            const Poly& q = chart->invertible_polys.at(i).poly;
            Poly dq = q.partial(s);
            if (dq.is_zero()) continue;
            Coefficient piece(chart);
            piece.num = num * dq * GaussianRational(-e);
            piece.den = den;
            piece.den[i] += 1;
            piece.normalize();
            r += piece;
        }
        return r;
    }

    bool mentions(SymId s) const {
        if (num.mentions(s)) return true;
        for (const auto& [i, e] : den)
            if (chart->invertible_polys.at(i).poly.mentions(s)) return true;
        return false;
    }
};

inline Coefficient pow(const Coefficient& c, int e) {
    Coefficient r(c.chart, GaussianRational(1));
    if (e == 0) return r;
    Coefficient base = e > 0 ? c : c.inverse();
    for (int k = 0; k < (e > 0 ? e : -e); ++k) r *= base;
    return r;
}

}  // namespace jetforms

#endif
