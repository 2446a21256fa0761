#ifndef JETFORMS_WEIL_HPP
#define JETFORMS_WEIL_HPP

#include <array>
#include <memory>

#include "jetforms/sexpr.hpp"

namespace jetforms {

/// Free graded differential algebra on connection generators om[i][j]
/// (degree 1, anticommuting) and curvature generators Om[i][j] (degree 2,
/// commuting), truncated: monomials with more than n curvature factors are
/// zero. Elements are forms over a dedicated chart whose differential rules
/// encode d om = Om - om*om and d Om = Om*om - om*Om.
class WeilAlgebra {
public:
    int n = 0;
    ChartPtr chart;
    std::vector<std::vector<SymId>> Om;   // [i][j], commuting
    std::vector<std::vector<FormId>> om;  // [i][j], anticommuting (free)
    std::vector<std::pair<int, int>> om_index;  // FormId -> (i, j)

    // extension with polynomial parameters for the transgression integral
    ChartPtr ext_chart;
    SymId ext_s = kNoSym, ext_e = kNoSym;

    static std::shared_ptr<const WeilAlgebra> get(int n) {
        static std::array<std::shared_ptr<const WeilAlgebra>, 8> cache;
        if (n < 1 || n >= static_cast<int>(cache.size())) throw Error("weil algebra: size out of range");
        if (!cache[n]) {
            auto w = std::make_shared<WeilAlgebra>();
            w->build(n);
            cache[n] = w;
        }
        return cache[n];
    }

    bool is_curvature_symbol(SymId s) const { return s < static_cast<SymId>(n * n); }

    int curvature_count(const Monomial& m) const {
        int c = 0;
        for (const auto& [id, e] : m.factors)
            if (is_curvature_symbol(id)) c += e;
        return c;
    }

private:
    static void install_rules(const std::shared_ptr<Chart>& c, int n,
                              const std::vector<std::vector<SymId>>& Om,
                              const std::vector<std::vector<FormId>>& om) {
        // d om^i_j = Om^i_j - om^i_k om^k_j
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                RuleForm rule;
                rule.push_back({Poly::var(Om[i][j]), {}});
                for (int k = 0; k < n; ++k) {
                    FormId a = om[i][k], b = om[k][j];
                    if (a == b) continue;  // repeated factor
                    if (a < b)
                        rule.push_back({Poly(-1), {a, b}});
                    else
                        rule.push_back({Poly(1), {b, a}});
                }
                c->set_form_diff_rule(om[i][j], rule);
            }
        // d Om^i_j = Om^i_k om^k_j - om^i_k Om^k_j
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                RuleForm rule;
                for (int k = 0; k < n; ++k) {
                    rule.push_back({Poly::var(Om[i][k]), {om[k][j]}});
                    rule.push_back({-Poly::var(Om[k][j]), {om[i][k]}});
                }
                c->set_diff_rule(Om[i][j], rule);
            }
    }

public:
    void build(int size) {
        n = size;
        auto c = std::make_shared<Chart>("weil-" + std::to_string(n));
        auto ce = std::make_shared<Chart>("weil-" + std::to_string(n) + "-ext");
        Om.assign(n, std::vector<SymId>(n));
        om.assign(n, std::vector<FormId>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::string suffix = "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
                Om[i][j] = c->add_symbol("W-Omega" + suffix, SymbolKind::auxiliary, false);
                SymId se = ce->add_symbol("W-Omega" + suffix, SymbolKind::auxiliary, false);
                if (se != Om[i][j]) throw Error("weil algebra: chart layout mismatch");
            }
        ext_s = ce->add_symbol("s", SymbolKind::auxiliary, false);
        ext_e = ce->add_symbol("e", SymbolKind::auxiliary, false);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::string suffix = "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
                om[i][j] = c->add_free_form("W-omega" + suffix);
                FormId fe = ce->add_free_form("W-omega" + suffix);
                if (fe != om[i][j]) throw Error("weil algebra: chart layout mismatch");
                om_index.emplace_back(i, j);
            }
        install_rules(c, n, Om, om);
        install_rules(ce, n, Om, om);
        chart = c;
        ext_chart = ce;
    }
};

using WeilPtr = std::shared_ptr<const WeilAlgebra>;

/// Element of the truncated algebra W_n, kept in truncated normal form.
struct WeilElement {
    WeilPtr alg;
    DiffForm form;

    WeilElement() = default;
    WeilElement(WeilPtr a, DiffForm f) : alg(std::move(a)), form(std::move(f)) { truncate(); }

    static WeilElement zero(const WeilPtr& a) { return {a, DiffForm(a->chart)}; }
    static WeilElement scalar(const WeilPtr& a, GaussianRational c) {
        return {a, DiffForm::scalar(a->chart, std::move(c))};
    }
    static WeilElement connection(const WeilPtr& a, int i, int j) {
        return {a, DiffForm::generator(a->chart, a->om[i][j])};
    }
    static WeilElement curvature(const WeilPtr& a, int i, int j) {
        return {a, DiffForm(a->chart, Coefficient::var(a->chart, a->Om[i][j]))};
    }

    void truncate() {
        for (auto it = form.terms.begin(); it != form.terms.end();) {
            Coefficient& c = it->second;
            Poly kept;
            for (const auto& [m, q] : c.num.terms)
                if (alg->curvature_count(m) <= alg->n) kept.add_term(m, q);
            c.num = std::move(kept);
            if (c.is_zero())
                it = form.terms.erase(it);
            else
                ++it;
        }
    }

    bool is_zero() const { return form.is_zero(); }

    /// Total degree (#om factors + 2 * #Om factors) when homogeneous.
    std::optional<int> degree() const {
        if (form.is_zero()) return 0;
        std::optional<int> deg;
        for (const auto& [mono, c] : form.terms)
            for (const auto& [m, q] : c.num.terms) {
                int d = mono.degree() + 2 * alg->curvature_count(m);
                if (!deg)
                    deg = d;
                else if (*deg != d)
                    return std::nullopt;
            }
        return deg ? deg : std::optional<int>(0);
    }

    friend WeilElement operator+(const WeilElement& a, const WeilElement& b) {
        return {a.alg, a.form + b.form};
    }
    friend WeilElement operator-(const WeilElement& a) { return {a.alg, -a.form}; }
    friend WeilElement operator-(const WeilElement& a, const WeilElement& b) { return {a.alg, a.form - b.form}; }
    friend WeilElement operator*(const WeilElement& a, const WeilElement& b) {
        return {a.alg, wedge(a.form, b.form)};
    }
    friend WeilElement operator*(const WeilElement& a, const GaussianRational& c) { return {a.alg, a.form * c}; }
    friend bool operator==(const WeilElement& a, const WeilElement& b) { return a.form == b.form; }
    friend bool operator!=(const WeilElement& a, const WeilElement& b) { return !(a == b); }
};

/// The differential of W_n; the truncation ideal is closed under it because
/// neither generator rule lowers the curvature count.
inline WeilElement d_weil(const WeilElement& a) { return {a.alg, exterior_d(a.form)}; }

/// Sum of principal k x k minors of the curvature matrix: the degree-2k part
/// of det(1 + Om).
inline WeilElement chern_class(int k, int n) {
    WeilPtr alg = WeilAlgebra::get(n);
    if (k < 1 || k > n) throw Error("chern class: index out of range");
    std::vector<int> subset(k);
    Poly total;
    // iterate k-subsets of {0..n-1}
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
        // permanent-style expansion of det over the subset
        std::vector<int> perm(subset.begin(), subset.end());
        std::sort(perm.begin(), perm.end());
        do {
            int sign = 1;
            // inversion parity of perm relative to subset order
            for (std::size_t x = 0; x < perm.size(); ++x)
                for (std::size_t y = x + 1; y < perm.size(); ++y)
                    if (perm[x] > perm[y]) sign = -sign;
            Poly term{GaussianRational(sign)};
            for (int x = 0; x < k; ++x) term *= Poly::var(alg->Om[subset[x]][perm[x]]);
            total += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        // next subset
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int x = pos + 1; x < k; ++x) subset[x] = subset[x - 1] + 1;
    }
    return {alg, DiffForm(alg->chart, Coefficient(alg->chart, total))};
}

/// p_i = c_{2i} on odd-dimensional structure groups.
inline WeilElement pontrjagin_class(int i, int n) {
    if (n % 2 == 0) throw Error("pontrjagin class: matrix size must be odd");
    if (i < 1 || 2 * i > n) throw Error("pontrjagin class: index out of range");
    return chern_class(2 * i, n);
}

namespace detail {

/// Graded determinant over a row subset: products taken in increasing row
/// order, so odd entries pick up their signs from the algebra itself.
inline DiffForm det_graded(const std::vector<std::vector<DiffForm>>& M, const std::vector<int>& rows,
                           const ChartPtr& ch) {
    DiffForm total(ch);
    std::vector<int> perm = rows;
    std::sort(perm.begin(), perm.end());
    do {
        int sign = 1;
        for (std::size_t x = 0; x < perm.size(); ++x)
            for (std::size_t y = x + 1; y < perm.size(); ++y)
                if (perm[x] > perm[y]) sign = -sign;
        DiffForm term = DiffForm::scalar(ch, GaussianRational(sign));
        for (std::size_t x = 0; x < rows.size(); ++x) term = wedge(term, M[rows[x]][perm[x]]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace detail

/// Transgression u_k with d_W u_k = c_k, realized by the Chern-Simons integral
/// u_k = integral_0^1 (d/de)|_0 c_k(s*Om + (s^2-s)*om*om + e*om) ds evaluated
/// exactly over the rationals.
inline WeilElement transgression(int k, int n) {
    if (k % 2 == 0) throw Error("transgression: index must be odd");
    if (k < 1 || k > n) throw Error("transgression: index out of range");
    WeilPtr alg = WeilAlgebra::get(n);
    const ChartPtr& ce = alg->ext_chart;
    Coefficient s = Coefficient::var(ce, alg->ext_s);
    Coefficient e = Coefficient::var(ce, alg->ext_e);
    Coefficient s2s = s * s - s;

    std::vector<std::vector<DiffForm>> M(n, std::vector<DiffForm>(n, DiffForm(ce)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            DiffForm entry(ce, Coefficient::var(ce, alg->Om[i][j]) * s);
            for (int kk = 0; kk < n; ++kk)
                entry += wedge(DiffForm::generator(ce, alg->om[i][kk]), DiffForm::generator(ce, alg->om[kk][j])) * s2s;
            entry += DiffForm::generator(ce, alg->om[i][j]) * e;
            M[i][j] = entry;
        }

    // c_k of the deformed matrix, over all principal k x k minors
    DiffForm ck(ce);
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
        ck += detail::det_graded(M, subset, ce);
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int x = pos + 1; x < k; ++x) subset[x] = subset[x - 1] + 1;
    }

    // e-linear part, then exact s-integral over [0,1]
    DiffForm result(alg->chart);
    for (const auto& [mono, c] : ck.terms) {
        Poly reduced;
        for (const auto& [m, q] : c.num.terms) {
            if (m.exponent(alg->ext_e) != 1) continue;
            Monomial rest = m * Monomial::var(alg->ext_e, -1);
            int a = rest.exponent(alg->ext_s);
            Monomial plain = rest * Monomial::var(alg->ext_s, -a);
            reduced.add_term(plain, q * GaussianRational(Rational(1, a + 1)));
        }
        if (!reduced.is_zero()) result.add_term(mono, Coefficient(alg->chart, reduced));
    }
    return {alg, result};
}

/// Antisymmetric matrix acting on W_n; the basis elements of so_n are
/// E_pq - E_qp for p < q.
struct LieMatrix {
    std::vector<std::vector<GaussianRational>> entries;

    explicit LieMatrix(int n) : entries(n, std::vector<GaussianRational>(n)) {}
    static LieMatrix so_basis(int n, int p, int q) {
        LieMatrix A(n);
        A.entries[p][q] = GaussianRational(1);
        A.entries[q][p] = GaussianRational(-1);
        return A;
    }
    bool is_antisymmetric() const {
        for (std::size_t i = 0; i < entries.size(); ++i)
            for (std::size_t j = 0; j < entries.size(); ++j)
                if (entries[i][j] != -entries[j][i]) return false;
        return true;
    }
};

/// Contraction by a Lie algebra element: iota_A om^i_j = A^i_j,
/// iota_A Om^i_j = 0, extended as an antiderivation.
inline WeilElement weil_contract(const LieMatrix& A, const WeilElement& a) {
    const ChartPtr& ch = a.alg->chart;
    DiffForm r(ch);
    for (const auto& [mono, c] : a.form.terms) {
        int sign = 1;
        for (std::size_t p = 0; p < mono.factors.size(); ++p) {
            auto [i, j] = a.alg->om_index.at(mono.factors[p]);
            const GaussianRational& aij = A.entries[i][j];
            if (!aij.is_zero()) {
                FormMono rest;
                for (std::size_t q = 0; q < mono.factors.size(); ++q)
                    if (q != p) rest.factors.push_back(mono.factors[q]);
                Coefficient t = c * aij;
                if (sign < 0) t = -t;
                r.add_term(rest, t);
            }
            sign = -sign;
        }
    }
    return {a.alg, r};
}

struct BasicWitness {
    bool basic = true;
    int p = -1, q = -1;       // failing so_n basis element, when not basic
    std::string residual;     // nonzero contraction or Lie derivative
};

/// Basic = horizontal (all contractions vanish) and invariant (all Lie
/// derivatives iota_A d + d iota_A vanish) for every so_n basis element.
inline BasicWitness is_so_basic(const WeilElement& a) {
    int n = a.alg->n;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            LieMatrix A = LieMatrix::so_basis(n, p, q);
            WeilElement contr = weil_contract(A, a);
            if (!contr.is_zero()) {
                return {false, p, q, "contraction: " + to_string(contr.form)};
            }
            WeilElement lie = weil_contract(A, d_weil(a)) + d_weil(contr);
            if (!lie.is_zero()) {
                return {false, p, q, "lie-derivative: " + to_string(lie.form)};
            }
        }
    return {};
}

}  // namespace jetforms

#endif
