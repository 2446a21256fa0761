#ifndef JETFORMS_NUMBERS_HPP
#define JETFORMS_NUMBERS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace jetforms {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return static_cast<double>(q); }

/// Exact complex scalar a + b*i with rational a, b.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(long n) : re(n) {}
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational inverse() const {
        if (is_zero()) throw Error("GaussianRational: division by zero");
        Rational n = norm();
        return {re / n, -im / n};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        return a * b.inverse();
    }
    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
    friend bool operator<(const GaussianRational& a, const GaussianRational& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    std::string str() const {
        std::ostringstream os;
        if (im == 0) {
            os << re;
        } else if (re == 0) {
            os << im << "*i";
        } else {
            os << re << (im > 0 ? "+" : "") << im << "*i";
        }
        return os.str();
    }
};

/// Exact scalar sum_k q_k * pi^k with Gaussian-rational q_k and k >= 0.
/// The value ring of chain/cochain pairings.
struct PiScalar {
    std::map<unsigned, GaussianRational> terms;  // power of pi -> coefficient, no zeros

    PiScalar() = default;
    PiScalar(GaussianRational c) {
        if (!c.is_zero()) terms.emplace(0u, std::move(c));
    }
    static PiScalar pi_power(unsigned k, GaussianRational c = GaussianRational(1)) {
        PiScalar s;
        if (!c.is_zero()) s.terms.emplace(k, std::move(c));
        return s;
    }

    bool is_zero() const { return terms.empty(); }

    friend PiScalar operator+(const PiScalar& a, const PiScalar& b) {
        PiScalar r = a;
        for (const auto& [k, c] : b.terms) {
            auto it = r.terms.find(k);
            if (it == r.terms.end()) {
                r.terms.emplace(k, c);
            } else {
                it->second += c;
                if (it->second.is_zero()) r.terms.erase(it);
            }
        }
        return r;
    }
    friend PiScalar operator-(const PiScalar& a) {
        PiScalar r;
        for (const auto& [k, c] : a.terms) r.terms.emplace(k, -c);
        return r;
    }
    friend PiScalar operator-(const PiScalar& a, const PiScalar& b) { return a + (-b); }
    friend PiScalar operator*(const PiScalar& a, const PiScalar& b) {
        PiScalar r;
        for (const auto& [ka, ca] : a.terms)
            for (const auto& [kb, cb] : b.terms) {
                GaussianRational c = ca * cb;
                if (c.is_zero()) continue;
                auto [it, fresh] = r.terms.emplace(ka + kb, c);
                if (!fresh) {
                    it->second += c;
                    if (it->second.is_zero()) r.terms.erase(it);
                }
            }
        return r;
    }
    PiScalar& operator+=(const PiScalar& b) { return *this = *this + b; }
    PiScalar& operator-=(const PiScalar& b) { return *this = *this - b; }
    PiScalar& operator*=(const PiScalar& b) { return *this = *this * b; }

    friend bool operator==(const PiScalar& a, const PiScalar& b) { return a.terms == b.terms; }
    friend bool operator!=(const PiScalar& a, const PiScalar& b) { return !(a == b); }

    std::complex<double> to_complex() const {
        std::complex<double> v{0.0, 0.0};
        double p = 3.14159265358979323846264338327950288;
        for (const auto& [k, c] : terms) v += c.to_complex() * std::pow(p, static_cast<double>(k));
        return v;
    }

    /// Canonical exact rendering, e.g. "8*pi^2", "-24*pi^2 + 1/2", "0".
    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms) {
            std::string cs = c.str();
            if (!first) {
                if (c.is_real() && c.re < 0) {
                    os << " - ";
                    cs = (-c).str();
                } else {
                    os << " + ";
                }
            }
            first = false;
            bool needs_parens = !c.is_real() && k > 0;
            if (k == 0) {
                os << cs;
            } else {
                if (needs_parens)
                    os << "(" << cs << ")";
                else if (cs == "1")
                    os << "";
                else if (cs == "-1")
                    os << "-";
                else
                    os << cs << "*";
                os << "pi" << (k == 1 ? "" : "^" + std::to_string(k));
            }
        }
        return os.str();
    }
};

}  // namespace jetforms

#endif
