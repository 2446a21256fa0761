#ifndef JETFORMS_ANOMALY_HPP
#define JETFORMS_ANOMALY_HPP

#include <set>

#include "jetforms/cochain.hpp"

namespace jetforms {

/// Kaehler metric rho(z, zb) dz dzb on the surface, with its logarithmic
/// derivatives kept as rational data (logarithms never materialize).
struct Metric {
    HoloJetPtr J;
    Coefficient rho;
    Coefficient dlog_z;        // (d/dz rho) / rho
    DiffForm partial_log;      // dz * dlog_z
    DiffForm curvature_form;   // (d/dz d/dzb log rho) dz wedge dzb

    static Metric from_density(const HoloJetPtr& J, Coefficient density) {
        Metric m;
        m.J = J;
        m.rho = std::move(density);
        std::string why;
        if (!m.rho.try_inverse(&why)) throw Error("metric: density is not invertible: " + why);
        Coefficient inv_rho = m.rho.inverse();
        m.dlog_z = m.rho.partial(J->z) * inv_rho;
        Coefficient dlog_zb = m.rho.partial(J->zb) * inv_rho;
        m.partial_log = DiffForm::generator(J->chart, J->dz) * m.dlog_z;
        Coefficient mixed = dlog_zb.partial(J->z);
        m.curvature_form = wedge(DiffForm::generator(J->chart, J->dz), DiffForm::generator(J->chart, J->dzb)) * mixed;
        return m;
    }

    static Metric flat(const HoloJetPtr& J) { return from_density(J, Coefficient(J->chart, GaussianRational(1))); }

    /// rho = 1/(1+z zb)^2, the round metric on the sphere.
    static Metric fubini_study(const HoloJetPtr& J) {
        Coefficient fs(J->chart, GaussianRational(1));
        fs.den[J->fs] = 2;
        return from_density(J, fs);
    }
};

/// The connection 1-form (y^-1)^z_z dy^z_z + dz d_z(log rho) as a 0-cochain:
/// its value on g_0 is the pullback by the prolongation of g_0.
inline CochainRule connection_rule(const GroupSystemPtr& G, const Metric& rho) {
    const HoloJetPtr& J = G->J;
    DiffForm omega_hat =
        exterior_d(Coefficient::var(J->chart, J->a)) * Coefficient::var(J->chart, J->a, -1) + rho.partial_log;
    return included_form(G, omega_hat, 1);
}

/// d/dz of the z-image of a word's action: the multiplier Z' of the word.
inline Coefficient z_derivative(const GroupSystemPtr& G, const GroupWord& w) {
    const Coefficient& Z = G->eval(w).image(G->J->z);
    return exterior_d(Z).coefficient_of(FormMono{{G->J->dz}});
}

/// The equivariant curvature (d + delta) of the connection: a (1,1) and a
/// (0,2) component, both valued in base forms.
struct EquivariantCurvature {
    CochainRule simplicial;  // bidegree (1,1): delta omega
    CochainRule de_rham;     // bidegree (0,2): d omega
};

inline EquivariantCurvature equivariant_curvature(const CochainRule& omega) {
    if (omega.n != 0 || omega.m != 1) throw Error("equivariant curvature: expected a (0,1) connection rule");
    return {delta_simplicial(omega), d_cochain(omega)};
}

inline TotalCochain curvature_total(const CochainRule& omega) {
    EquivariantCurvature c = equivariant_curvature(omega);
    TotalCochain t(omega.G);
    t.add_part(c.simplicial);
    t.add_part(c.de_rham);
    return t;
}

/// The equivariant 4-cocycle -Omega^2 representing the first Pontrjagin class.
inline TotalCochain p1_cocycle(const GroupSystemPtr& G, const Metric& rho) {
    TotalCochain Omega = curvature_total(connection_rule(G, rho));
    return -product(Omega, Omega);
}

namespace detail {

/// One representative word per interned substitution class.
inline std::vector<GroupWord> class_representatives(const GroupSystemPtr& G, const std::vector<GroupWord>& words) {
    std::map<int, GroupWord> reps;
    for (const auto& w : words) reps.emplace(G->subst_id(w), w);
    std::vector<GroupWord> out;
    out.reserve(reps.size());
    for (auto& [id, w] : reps) out.push_back(w);
    return out;
}

/// Run fn over every arity-tuple drawn from the representative words; stops
/// early when fn returns false.
inline bool for_each_tuple(const std::vector<GroupWord>& reps, int arity,
                           const std::function<bool(const std::vector<GroupWord>&)>& fn) {
    std::vector<std::size_t> odo(arity, 0);
    std::vector<GroupWord> tuple(arity);
    while (true) {
        for (int i = 0; i < arity; ++i) tuple[i] = reps[odo[i]];
        if (!fn(tuple)) return false;
        int pos = arity - 1;
        while (pos >= 0 && ++odo[pos] == reps.size()) odo[pos--] = 0;
        if (pos < 0) return true;
    }
}

}  // namespace detail

/// Two total cochains agree on every tuple of the given words. Rules evaluate
/// through word substitutions, so tuples are enumerated over substitution
/// classes with one word representative each.
inline bool total_equal_on_words(const TotalCochain& a, const TotalCochain& b, const std::vector<GroupWord>& words,
                                 std::string* residual = nullptr) {
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, p] : a.parts) keys.insert(k);
    for (const auto& [k, p] : b.parts) keys.insert(k);
    const GroupSystemPtr& G = a.G;
    std::vector<GroupWord> reps = detail::class_representatives(G, words);
    for (auto [n, m] : keys) {
        const CochainRule* pa = a.parts.count({n, m}) ? &a.parts.at({n, m}) : nullptr;
        const CochainRule* pb = b.parts.count({n, m}) ? &b.parts.at({n, m}) : nullptr;
        bool ok = detail::for_each_tuple(reps, n + 1, [&](const std::vector<GroupWord>& tuple) {
            DiffForm va = pa ? (*pa)(tuple) : DiffForm(G->chart());
            DiffForm vb = pb ? (*pb)(tuple) : DiffForm(G->chart());
            if (va == vb) return true;
            if (residual) {
                *residual = "bidegree (" + std::to_string(n) + "," + std::to_string(m) + "): " +
                            to_string(va - vb);
            }
            return false;
        });
        if (!ok) return false;
    }
    return true;
}

inline bool total_vanishes_on_words(const TotalCochain& a, const std::vector<GroupWord>& words,
                                    std::string* residual = nullptr) {
    return total_equal_on_words(a, TotalCochain(a.G), words, residual);
}

inline TotalCochain scale(const TotalCochain& a, const GaussianRational& c) {
    TotalCochain r(a.G);
    for (const auto& [k, p] : a.parts) r.add_part(p * c);
    return r;
}

/// Omega^2 - R^2 = 1/2 (d+delta)((omega-theta)(Omega+R) + (Omega+R)(omega-theta)),
/// verified exactly on all tuples of words up to the given length.
inline bool exactness_homotopy_check(const GroupSystemPtr& G, const Metric& rho, int max_word_len = 1,
                                     std::string* residual = nullptr) {
    const HoloJetPtr& J = G->J;
    CochainRule omega = connection_rule(G, rho);
    CochainRule theta_rule = included_form(G, theta_conn(*J, 0, 0), 1);
    CochainRule curv_rule = included_form(G, curvature(*J, 0, 0), 2);
    TotalCochain Omega = curvature_total(omega);
    TotalCochain R(G);
    R.add_part(curv_rule);
    TotalCochain A(G);
    A.add_part(omega + (-theta_rule));
    TotalCochain OR = Omega + R;
    TotalCochain lhs = product(Omega, Omega) - product(R, R);
    TotalCochain rhs = scale((product(A, OR) + product(OR, A)).d_plus_delta(), GaussianRational(Rational(1, 2)));
    return total_equal_on_words(lhs, rhs, G->words_up_to(max_word_len), residual);
}

/// xi^z = dt * (d/dt of the z-image) composed with the inverse word.
inline DiffForm ghost_field(const GroupSystemPtr& G, const GroupWord& g) {
    const HoloJetPtr& J = G->J;
    const Coefficient& Z = G->eval(g).image(J->z);
    Coefficient dtZ = exterior_d(Z).coefficient_of(FormMono{{J->dt}});
    Coefficient composed = G->eval(g.inverse()).apply(dtZ);
    return DiffForm::generator(J->chart, J->dt) * composed;
}

/// Covariant derivative of the ghost component: D_z xi = (d/dz X + X d_z log rho) dt.
inline DiffForm ghost_covariant_derivative(const GroupSystemPtr& G, const GroupWord& g, const Metric& rho) {
    const HoloJetPtr& J = G->J;
    Coefficient X = ghost_field(G, g).coefficient_of(FormMono{{J->dt}});
    Coefficient D = X.partial(J->z) + X * rho.dlog_z;
    return DiffForm::generator(J->chart, J->dt) * D;
}

/// R_rho (d log Z' + (partial log rho) after g) = R_rho (D_z xi^z) after g.
inline bool ghost_identity_check(const GroupSystemPtr& G, const GroupWord& g, const Metric& rho,
                                 std::string* residual = nullptr) {
    Coefficient Zp = z_derivative(G, g);
    DiffForm lhs_factor = log_derivative(Zp) + pullback(G->eval(g), rho.partial_log);
    DiffForm lhs = wedge(rho.curvature_form, lhs_factor);
    DiffForm rhs_factor = pullback(G->eval(g), ghost_covariant_derivative(G, g, rho));
    DiffForm rhs = wedge(rho.curvature_form, rhs_factor);
    if (lhs == rhs) return true;
    if (residual) *residual = to_string(lhs - rhs);
    return false;
}

}  // namespace jetforms

#endif
