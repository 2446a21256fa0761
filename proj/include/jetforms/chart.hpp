#ifndef JETFORMS_CHART_HPP
#define JETFORMS_CHART_HPP

#include <bit>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetforms/poly.hpp"

namespace jetforms {

enum class SymbolKind { coordinate, jet, circle, auxiliary };

enum class ConjKind {
    self,       // real symbol: conj(x) = x
    partner,    // conj(x) = the paired symbol (z <-> zbar)
    reciprocal  // unit-circle symbol: conj(u) = u^-1
};

using FormId = std::uint16_t;
constexpr SymId kNoSym = 0xffff;
constexpr FormId kNoForm = 0xffff;

/// One term of a differential-rule right-hand side, stored without a chart
/// back-reference: polynomial coefficient times a wedge of 1-form symbols.
struct RuleTerm {
    Poly coeff;
    std::vector<FormId> wedge;  // strictly increasing FormIds
};
using RuleForm = std::vector<RuleTerm>;

/// Directed contraction identity for matrix-inverse jet symbols: a monomial
/// containing lead_a*lead_b is rewritten with that pair replaced by `rhs`.
struct ContractionRule {
    SymId lead_a, lead_b;
    Poly rhs;
};

/// A coordinate system: named commuting generators, their 1-form symbols,
/// declared invertibles, differential rules, and a formal conjugation.
///
/// A commuting symbol either has a "basic" differential (its own 1-form symbol)
/// or a rule expressing the differential in the other generators, e.g. a circle
/// symbol w over t with dw = i*w dt, or a matrix-inverse symbol with
/// d(y^-1) = -y^-1 (dy) y^-1. Symbols with neither cannot be differentiated.
class Chart {
public:
    struct CommSymbol {
        std::string name;
        SymbolKind kind = SymbolKind::auxiliary;
        FormId diff = kNoForm;    // 1-form symbol of the differential, if basic
        bool has_rule = false;    // differential given by diff_rules
        bool invertible = false;  // monomial invertible (Laurent exponents allowed)
        ConjKind conj_kind = ConjKind::self;
        SymId conj = kNoSym;  // partner symbol when conj_kind == partner
    };
    struct FormSymbol {
        std::string name;
        SymId of = kNoSym;     // commuting symbol this is the differential of
        bool has_rule = false;  // d(xi) rule for free 1-form symbols
    };
    struct NamedPoly {
        std::string name;
        Poly poly;
    };

    std::string name;
    std::vector<CommSymbol> symbols;
    std::vector<FormSymbol> form_symbols;
    std::vector<NamedPoly> invertible_polys;      // irreducible, pairwise coprime
    std::unordered_map<SymId, RuleForm> diff_rules;
    std::unordered_map<FormId, RuleForm> form_diff_rules;  // 2-form rules for free 1-forms
    std::vector<ContractionRule> contractions;
    std::vector<std::uint32_t> lead_a_mask, lead_b_mask;  // per symbol, bit r set when rule r leads here

    explicit Chart(std::string chart_name) : name(std::move(chart_name)) {}

    SymId add_symbol(std::string sym_name, SymbolKind kind, bool with_differential = true) {
        SymId id = static_cast<SymId>(symbols.size());
        CommSymbol s;
        s.name = std::move(sym_name);
        s.kind = kind;
        if (with_differential) {
            FormId f = static_cast<FormId>(form_symbols.size());
            form_symbols.push_back({"d" + s.name, id, false});
            s.diff = f;
        }
        symbols.push_back(std::move(s));
        return id;
    }

    FormId add_free_form(std::string form_name) {
        FormId id = static_cast<FormId>(form_symbols.size());
        form_symbols.push_back({std::move(form_name), kNoSym, false});
        return id;
    }

    void set_diff_rule(SymId s, RuleForm rule) {
        symbols.at(s).has_rule = true;
        diff_rules[s] = std::move(rule);
    }
    void set_form_diff_rule(FormId f, RuleForm rule) {
        form_symbols.at(f).has_rule = true;
        form_diff_rules[f] = std::move(rule);
    }
    void set_invertible(SymId s) { symbols.at(s).invertible = true; }
    void set_conj_pair(SymId a, SymId b) {
        symbols.at(a).conj_kind = ConjKind::partner;
        symbols.at(a).conj = b;
        symbols.at(b).conj_kind = ConjKind::partner;
        symbols.at(b).conj = a;
    }
    void set_conj_reciprocal(SymId s) { symbols.at(s).conj_kind = ConjKind::reciprocal; }

    int add_invertible_poly(std::string poly_name, Poly p) {
        invertible_polys.push_back({std::move(poly_name), std::move(p)});
        return static_cast<int>(invertible_polys.size()) - 1;
    }

    SymId find_symbol(const std::string& n) const {
        for (SymId i = 0; i < symbols.size(); ++i)
            if (symbols[i].name == n) return i;
        throw Error("chart '" + name + "': unknown symbol '" + n + "'");
    }
    FormId find_form(const std::string& n) const {
        for (FormId i = 0; i < form_symbols.size(); ++i)
            if (form_symbols[i].name == n) return i;
        throw Error("chart '" + name + "': unknown 1-form symbol '" + n + "'");
    }
    int find_invertible_poly(const std::string& n) const {
        for (int i = 0; i < static_cast<int>(invertible_polys.size()); ++i)
            if (invertible_polys[i].name == n) return i;
        throw Error("chart '" + name + "': unknown invertible '" + n + "'");
    }

    const std::string& symbol_name(SymId s) const { return symbols.at(s).name; }
    const std::string& form_name(FormId f) const { return form_symbols.at(f).name; }

    bool has_contractions() const { return !contractions.empty(); }

    void add_contraction(ContractionRule rule) {
        if (contractions.size() >= 32) throw Error("chart: too many contraction rules");
        std::uint32_t bit = 1u << contractions.size();
        lead_a_mask.resize(symbols.size(), 0);
        lead_b_mask.resize(symbols.size(), 0);
        lead_a_mask.at(rule.lead_a) |= bit;
        lead_b_mask.at(rule.lead_b) |= bit;
        contractions.push_back(std::move(rule));
    }

    /// Deterministic fixpoint reduction by the declared contraction identities.
    /// Each step eliminates one lead pair and introduces none, so it terminates.
    Poly reduce(Poly p) const {
        if (contractions.empty()) return p;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [m, c] : p.terms) {
                std::uint32_t amask = 0, bmask = 0;
                for (const auto& [id, e] : m.factors) {
                    amask |= lead_a_mask[id];
                    bmask |= lead_b_mask[id];
                }
                std::uint32_t both = amask & bmask;
                if (both) {
                    int r = std::countr_zero(both);
                    const auto& rule = contractions[r];
                    Monomial rest = m * Monomial::var(rule.lead_a, -1) * Monomial::var(rule.lead_b, -1);
                    Poly replaced = rule.rhs.multiply_monomial(rest) * c;
                    Poly next = p;
                    next.add_term(m, -c);
                    next += replaced;
                    p = std::move(next);
                    changed = true;
                    break;
                }
            }
        }
        return p;
    }
};

using ChartPtr = std::shared_ptr<const Chart>;

}  // namespace jetforms

#endif
