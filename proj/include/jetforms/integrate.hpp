#ifndef JETFORMS_INTEGRATE_HPP
#define JETFORMS_INTEGRATE_HPP

#include <complex>

#include "jetforms/chain.hpp"

namespace jetforms {

/// Exact integration over a parameterized chain: every circle factor takes the
/// residue (2 pi times the unit-power-zero coefficient), every interval factor
/// integrates its polynomial dependence exactly. Rejects integrands outside
/// the Laurent/polynomial system; the quadrature oracle covers those.
inline PiScalar integrate(const DiffForm& a, const ParamChain& c) {
    if (c.null_current || a.is_zero()) return {};
    auto deg = a.degree();
    if (!deg) throw Error("integrate: inhomogeneous integrand");
    if (*deg != c.dimension())
        throw Error("integrate: degree " + std::to_string(*deg) + " does not match chain dimension " +
                    std::to_string(c.dimension()));
    std::string offender;
    if (!c.mentions_only_embedded(a, &offender))
        throw Error("integrate: form mentions '" + offender + "' which the chain does not embed");
    DiffForm pulled = pullback(c.base_substitution(), a);
    if (pulled.is_zero()) return {};
    if (pulled.terms.size() != 1) throw Error("integrate: unexpected pullback shape");
    const auto& [mono, top] = *pulled.terms.begin();
    if (mono.degree() != c.dimension()) throw Error("integrate: pullback is not a top form");
    if (!top.den.empty())
        throw Error("integrate: pullback has a polynomial denominator; only the quadrature oracle applies");

    PiScalar total;
    for (const auto& [m, q] : top.num.terms) {
        PiScalar term{q};
        for (std::size_t i = 0; i < c.factors.size() && !term.is_zero(); ++i) {
            const ChainFactor& f = c.factors[i];
            if (f.kind == ChainFactor::Kind::circle) {
                if (m.exponent(c.coords[i]) != 0)
                    throw Error("integrate: non-Laurent dependence on circle symbol '" + f.name + "'");
                if (m.exponent(c.units[i]) != 0)
                    term = PiScalar{};  // residue vanishes off power zero
                else
                    term *= PiScalar::pi_power(1, GaussianRational(2));
            } else {
                int k = m.exponent(c.coords[i]);
                if (k < 0)
                    throw Error("integrate: negative power of interval symbol '" + f.name + "'");
                Rational hi = f.upper, lo = f.lower;
                Rational hi_pow = 1, lo_pow = 1;
                for (int e = 0; e < k + 1; ++e) {
                    hi_pow *= hi;
                    lo_pow *= lo;
                }
                term *= PiScalar(GaussianRational((hi_pow - lo_pow) / Rational(k + 1)));
            }
        }
        total += term;
    }
    if (c.orientation < 0) total = -total;
    return total;
}

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
};

namespace detail {

inline std::complex<double> eval_poly(const Poly& p, const std::vector<std::complex<double>>& point) {
    std::complex<double> total{0.0, 0.0};
    for (const auto& [m, q] : p.terms) {
        std::complex<double> v = q.to_complex();
        for (const auto& [id, e] : m.factors) v *= std::pow(point[id], e);
        total += v;
    }
    return total;
}

inline std::complex<double> eval_coefficient(const Coefficient& c, const std::vector<std::complex<double>>& point) {
    std::complex<double> v = eval_poly(c.num, point);
    for (const auto& [i, e] : c.den)
        v /= std::pow(eval_poly(c.chart->invertible_polys.at(i).poly, point), e);
    return v;
}

inline std::complex<double> quadrature_pass(const Coefficient& top, const ParamChain& c, int samples) {
    const double pi = 3.14159265358979323846264338327950288;
    int dims = c.dimension();
    std::vector<std::complex<double>> point(c.pchart->symbols.size(), std::complex<double>(0.0, 0.0));
    std::vector<int> odo(dims, 0);
    std::complex<double> acc{0.0, 0.0};
    // composite weights per factor
    auto weight = [&](int i, int j) -> double {
        const ChainFactor& f = c.factors[i];
        if (f.kind == ChainFactor::Kind::circle) return 2.0 * pi / samples;
        // Simpson on samples subintervals (samples even, j = 0..samples)
        double h = (to_double(f.upper) - to_double(f.lower)) / samples;
        if (j == 0 || j == samples) return h / 3.0;
        return (j % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    };
    auto points_in = [&](int i) {
        return c.factors[i].kind == ChainFactor::Kind::circle ? samples : samples + 1;
    };
    while (true) {
        double w = 1.0;
        for (int i = 0; i < dims; ++i) {
            const ChainFactor& f = c.factors[i];
            if (f.kind == ChainFactor::Kind::circle) {
                double phi = 2.0 * pi * odo[i] / samples;
                point[c.coords[i]] = phi;
                point[c.units[i]] = std::polar(1.0, phi);
            } else {
                double lo = to_double(f.lower);
                double h = (to_double(f.upper) - lo) / samples;
                point[c.coords[i]] = lo + h * odo[i];
            }
            w *= weight(i, odo[i]);
        }
        acc += w * eval_coefficient(top, point);
        int pos = dims - 1;
        while (pos >= 0 && ++odo[pos] == points_in(pos)) odo[pos--] = 0;
        if (pos < 0) break;
    }
    return acc;
}

}  // namespace detail

/// Product trapezoid/Simpson quadrature over the parameter torus/box; the
/// independent oracle for the exact integral.
inline QuadratureResult integrate_numeric(const DiffForm& a, const ParamChain& c, int samples_per_dim = 256) {
    if (c.null_current || a.is_zero()) return {};
    auto deg = a.degree();
    if (!deg || *deg != c.dimension()) throw Error("integrate_numeric: degree does not match chain dimension");
    std::string offender;
    if (!c.mentions_only_embedded(a, &offender))
        throw Error("integrate_numeric: form mentions '" + offender + "'");
    DiffForm pulled = pullback(c.base_substitution(), a);
    if (pulled.is_zero()) return {};
    const auto& [mono, top] = *pulled.terms.begin();
    for (std::size_t i = 0; i < c.factors.size(); ++i)
        if (c.factors[i].kind == ChainFactor::Kind::interval)
            for (const auto& [m, q] : top.num.terms)
                if (m.exponent(c.coords[i]) < 0)
                    throw Error("integrate_numeric: pole in interval symbol '" + c.factors[i].name + "'");
    if (samples_per_dim % 2 == 1) ++samples_per_dim;
    QuadratureResult r;
    r.value = detail::quadrature_pass(top, c, samples_per_dim);
    std::complex<double> coarse = detail::quadrature_pass(top, c, samples_per_dim / 2);
    r.error_estimate = std::abs(r.value - coarse);
    if (c.orientation < 0) {
        r.value = -r.value;
    }
    return r;
}

/// Pairing of an inhomogeneous cochain with a chain element: terms whose word
/// count and chain dimension match the cochain's bidegree contribute the
/// integral of the evaluated form; everything else contributes zero.
inline PiScalar pair(const GroupCochain& f, const ChainElement& e) {
    PiScalar total;
    for (const auto& t : e.terms) {
        if (static_cast<int>(t.words.size()) != f.n) continue;
        if (t.chain.dimension() != f.m) continue;
        if (t.chain.null_current) continue;
        PiScalar v = integrate(f(t.words), t.chain);
        total += v * PiScalar(t.coeff);
    }
    return total;
}

inline PiScalar pair(const std::vector<GroupCochain>& components, const ChainElement& e) {
    PiScalar total;
    for (const auto& f : components) total += pair(f, e);
    return total;
}

/// The five test 2-forms used for weak current equalities.
inline std::vector<DiffForm> standard_test_basis(const HoloJetPtr& J) {
    auto v = [&](SymId s, int e = 1) { return Coefficient::var(J->chart, s, e); };
    DiffForm dz = DiffForm::generator(J->chart, J->dz);
    DiffForm dzb = DiffForm::generator(J->chart, J->dzb);
    DiffForm dt = DiffForm::generator(J->chart, J->dt);
    Coefficient one_plus(J->chart, GaussianRational(1));
    one_plus += v(J->z) * v(J->zb);
    Coefficient inv = one_plus.inverse();
    return {
        wedge(dt, dz) * v(J->z, -1),
        wedge(dt, dzb) * v(J->zb, -1),
        wedge(dz, dzb) * pow(inv, 2),
        wedge(dt, dzb * v(J->z) - dz * v(J->zb)) * inv,
        wedge(dt, dz) * v(J->zb),
    };
}

/// Every word-tuple component of the element pairs to zero against each basis
/// form of matching degree.
inline bool weak_zero_against_basis(const ChainElement& e, const std::vector<DiffForm>& basis,
                                    std::string* detail_out = nullptr) {
    std::map<std::pair<std::string, int>, std::vector<const ChainElement::Term*>> groups;
    for (const auto& t : e.terms) {
        std::string key;
        for (int id : e.G->tuple_ids(t.words)) key += std::to_string(id) + ",";
        groups[{key, t.chain.dimension()}].push_back(&t);
    }
    for (const auto& [key, terms] : groups) {
        for (const DiffForm& X : basis) {
            if (*X.degree() != key.second) continue;
            PiScalar total;
            for (const auto* t : terms) total += integrate(X, t->chain) * PiScalar(t->coeff);
            if (!total.is_zero()) {
                if (detail_out)
                    *detail_out = "words [" + key.first + "] against " + to_string(X) + " -> " + total.str();
                return false;
            }
        }
    }
    return true;
}

/// Winding number of a sampled loop of nonzero complex values: the cyclic sum
/// of principal argument increments over 2 pi.
inline int winding_number(const std::vector<std::complex<double>>& samples) {
    if (samples.size() < 3) throw Error("winding number: need at least 3 samples");
    const double pi = 3.14159265358979323846264338327950288;
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::complex<double> a = samples[i];
        std::complex<double> b = samples[(i + 1) % samples.size()];
        if (!(std::abs(a) > 0.0) || !std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw Error("winding number: zero or invalid sample at index " + std::to_string(i));
        double inc = std::arg(b / a);
        if (std::abs(inc) >= pi * (1.0 - 1e-9))
            throw Error("winding number: consecutive samples are antipodal; sampling is inadequate");
        total += inc;
    }
    double w = total / (2.0 * pi);
    long rounded = std::lround(w);
    if (std::abs(w - static_cast<double>(rounded)) > 0.25)
        throw Error("winding number: increments do not close to an integer");
    return static_cast<int>(rounded);
}

}  // namespace jetforms

#endif
