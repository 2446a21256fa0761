#ifndef JETFORMS_POLY_HPP
#define JETFORMS_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jetforms/numbers.hpp"

namespace jetforms {

using SymId = std::uint16_t;

/// Commutative (Laurent) monomial: sorted (symbol, exponent) pairs, exponents nonzero.
/// Negative exponents are only ever produced for symbols a chart declares invertible.
struct Monomial {
    std::vector<std::pair<SymId, int>> factors;

    Monomial() = default;
    static Monomial var(SymId s, int e = 1) {
        Monomial m;
        if (e != 0) m.factors.emplace_back(s, e);
        return m;
    }

    bool is_one() const { return factors.empty(); }

    int exponent(SymId s) const {
        for (const auto& [id, e] : factors)
            if (id == s) return e;
        return 0;
    }
    bool contains(SymId s) const { return exponent(s) != 0; }

    int total_degree() const {
        int d = 0;
        for (const auto& [id, e] : factors) d += e;
        return d;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r;
        r.factors.reserve(a.factors.size() + b.factors.size());
        auto i = a.factors.begin(), j = b.factors.begin();
        while (i != a.factors.end() && j != b.factors.end()) {
            if (i->first < j->first) {
                r.factors.push_back(*i++);
            } else if (j->first < i->first) {
                r.factors.push_back(*j++);
            } else {
                int e = i->second + j->second;
                if (e != 0) r.factors.emplace_back(i->first, e);
                ++i, ++j;
            }
        }
        r.factors.insert(r.factors.end(), i, a.factors.end());
        r.factors.insert(r.factors.end(), j, b.factors.end());
        return r;
    }

    Monomial inverse() const {
        Monomial r = *this;
        for (auto& [id, e] : r.factors) e = -e;
        return r;
    }

    /// Exact monomial quotient a / b (may have negative exponents).
    friend Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.inverse(); }

    /// True when every exponent of b is <= the matching exponent of a (all nonnegative context).
    bool divisible_by(const Monomial& b) const {
        for (const auto& [id, e] : b.factors)
            if (exponent(id) < e) return false;
        return true;
    }

    bool has_negative_exponent() const {
        for (const auto& [id, e] : factors)
            if (e < 0) return true;
        return false;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors == b.factors; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    /// Lexicographic order on exponent vectors (symbol 0 most significant).
    /// Multiplicative: a < b implies a*t < b*t, which makes leading-term division sound.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        auto i = a.factors.begin(), j = b.factors.begin();
        while (i != a.factors.end() || j != b.factors.end()) {
            SymId sa = i != a.factors.end() ? i->first : SymId(0xffff);
            SymId sb = j != b.factors.end() ? j->first : SymId(0xffff);
            SymId s = std::min(sa, sb);
            int ea = (sa == s) ? i->second : 0;
            int eb = (sb == s) ? j->second : 0;
            if (ea != eb) return ea < eb;
            if (sa == s) ++i;
            if (sb == s) ++j;
        }
        return false;
    }
};

/// Multivariate Laurent polynomial over GaussianRational with canonically ordered terms.
struct Poly {
    std::map<Monomial, GaussianRational> terms;  // no zero coefficients

    Poly() = default;
    Poly(GaussianRational c) {
        if (!c.is_zero()) terms.emplace(Monomial{}, std::move(c));
    }
    Poly(long n) : Poly(GaussianRational(n)) {}
    static Poly var(SymId s, int e = 1) {
        Poly p;
        p.terms.emplace(Monomial::var(s, e), GaussianRational(1));
        return p;
    }
    static Poly term(Monomial m, GaussianRational c) {
        Poly p;
        if (!c.is_zero()) p.terms.emplace(std::move(m), std::move(c));
        return p;
    }

    bool is_zero() const { return terms.empty(); }
    bool is_one() const {
        return terms.size() == 1 && terms.begin()->first.is_one() && terms.begin()->second == GaussianRational(1);
    }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one()); }
    GaussianRational constant_value() const {
        if (terms.empty()) return GaussianRational(0);
        return terms.begin()->second;
    }
    /// Single term c*m, or nothing.
    std::optional<std::pair<Monomial, GaussianRational>> as_single_term() const {
        if (terms.size() != 1) return std::nullopt;
        return *terms.begin();
    }

    bool mentions(SymId s) const {
        for (const auto& [m, c] : terms)
            if (m.contains(s)) return true;
        return false;
    }

    void add_term(const Monomial& m, const GaussianRational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [m, c] : b.terms) r.add_term(m, c);
        return r;
    }
    friend Poly operator-(const Poly& a) {
        Poly r;
        for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator+=(const Poly& b) {
        for (const auto& [m, c] : b.terms) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& b) { return *this += -b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    friend Poly operator*(const Poly& a, const GaussianRational& c) {
        if (c.is_zero()) return {};
        Poly r;
        for (const auto& [m, k] : a.terms) r.terms.emplace(m, k * c);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) {
        return std::lexicographical_compare(
            a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(), [](const auto& x, const auto& y) {
                if (x.first != y.first) return x.first < y.first;
                return x.second < y.second;
            });
    }

    /// Componentwise-minimum monomial of all terms; factoring it out leaves
    /// every symbol with minimum exponent zero.
    Monomial content_monomial() const {
        if (terms.empty()) return {};
        bool first = true;
        std::map<SymId, int> mins;
        for (const auto& [m, c] : terms) {
            std::map<SymId, int> cur;
            for (const auto& [id, e] : m.factors) cur[id] = e;
            if (first) {
                mins = cur;
                first = false;
            } else {
                for (auto it = mins.begin(); it != mins.end();) {
                    auto f = cur.find(it->first);
                    int e = (f == cur.end()) ? 0 : f->second;
                    it->second = std::min(it->second, e);
                    if (it->second == 0)
                        it = mins.erase(it);
                    else
                        ++it;
                }
                for (const auto& [id, e] : cur)
                    if (e < 0 && !mins.count(id)) mins[id] = 0;  // min with the absent-zero
            }
        }
        Monomial m;
        for (const auto& [id, e] : mins)
            if (e != 0) m.factors.emplace_back(id, e);
        return m;
    }

    Poly multiply_monomial(const Monomial& m) const {
        Poly r;
        for (const auto& [mm, c] : terms) r.terms.emplace(mm * m, c);
        return r;
    }

    /// Exact multivariate division test; the quotient is returned when b divides
    /// this polynomial. Both sides are first reduced by their monomial content,
    /// so Laurent inputs are handled. Leading-term reduction in the lex order is
    /// complete for exact divisibility because the order is multiplicative.
    std::optional<Poly> divide_exact(const Poly& b) const {
        if (b.is_zero()) throw Error("Poly: division by zero polynomial");
        if (is_zero()) return Poly{};
        Monomial ca = content_monomial();
        Monomial cb = b.content_monomial();
        Poly pa = multiply_monomial(ca.inverse());
        Poly pb = b.multiply_monomial(cb.inverse());
        // leading term = greatest in the term order
        auto lead = [](const Poly& p) { return std::prev(p.terms.end()); };
        Poly q;
        auto lb = lead(pb);
        while (!pa.is_zero()) {
            auto la = lead(pa);
            if (!la->first.divisible_by(lb->first)) return std::nullopt;
            Monomial qm = la->first / lb->first;
            GaussianRational qc = la->second / lb->second;
            q.add_term(qm, qc);
            pa -= pb.multiply_monomial(qm) * qc;
        }
        return q.multiply_monomial(ca / cb);
    }

    /// Formal partial derivative; Laurent exponents differentiate as e*x^(e-1).
    Poly partial(SymId s) const {
        Poly r;
        for (const auto& [m, c] : terms) {
            int e = m.exponent(s);
            if (e == 0) continue;
            r.add_term(m * Monomial::var(s, -1), c * GaussianRational(e));
        }
        return r;
    }
};

}  // namespace jetforms

#endif
