#ifndef JETFORMS_JETS_HPP
#define JETFORMS_JETS_HPP

#include "jetforms/subst.hpp"
#include "jetforms/weil.hpp"

namespace jetforms {

/// Chart of an order-k jet bundle together with the tautological geometry.
/// Entries of the jet matrix and its inverse are exposed uniformly as
/// coefficients, so the same formulas drive the generic chart (independent
/// inverse symbols for n >= 2) and restricted charts (triangular inverses).
struct JetBundle {
    ChartPtr chart;
    int n = 0;
    int order = 0;
    std::vector<SymId> x;
    std::vector<std::vector<Coefficient>> y;                 // y[mu][i]
    std::vector<std::vector<std::vector<Coefficient>>> y2;   // y2[mu][i][j], symmetric in (i, j)
    std::vector<std::vector<Coefficient>> yinv;              // yinv[i][mu]
    std::vector<FormId> base_diffs;                          // dx^mu
    std::vector<std::vector<DiffForm>> conn;                 // theta^i_j (order >= 2)
    std::vector<std::vector<DiffForm>> curv;                 // R^i_j (order >= 2)

    DiffForm dx(int mu) const { return DiffForm::generator(chart, base_diffs.at(mu)); }

    void check_index(int i) const {
        if (i < 0 || i >= n) throw Error("jet bundle: index out of range");
    }
};

using JetBundlePtr = std::shared_ptr<const JetBundle>;

/// theta^i = (y^-1)^i_mu dx^mu
inline DiffForm theta(const JetBundle& J, int i) {
    if (J.order < 1) throw Error("theta: jet order must be at least 1");
    J.check_index(i);
    DiffForm r(J.chart);
    for (int mu = 0; mu < J.n; ++mu) r += J.dx(mu) * J.yinv[i][mu];
    return r;
}

namespace detail {

/// theta^i_j = (y^-1)^i_mu dy^mu_j - y^mu_jk (y^-1)^i_mu (y^-1)^k_nu dx^nu
inline DiffForm build_theta_conn(const JetBundle& J, int i, int j) {
    DiffForm r(J.chart);
    for (int mu = 0; mu < J.n; ++mu) {
        if (!J.yinv[i][mu].is_zero()) r += exterior_d(J.y[mu][j]) * J.yinv[i][mu];
        for (int k = 0; k < J.n; ++k)
            for (int nu = 0; nu < J.n; ++nu) {
                Coefficient c = J.y2[mu][j][k] * J.yinv[i][mu] * J.yinv[k][nu];
                if (!c.is_zero()) r -= J.dx(nu) * c;
            }
    }
    return r;
}

inline void build_geometry(JetBundle& J) {
    if (J.order < 2) return;
    J.conn.assign(J.n, std::vector<DiffForm>(J.n, DiffForm(J.chart)));
    J.curv.assign(J.n, std::vector<DiffForm>(J.n, DiffForm(J.chart)));
    for (int i = 0; i < J.n; ++i)
        for (int j = 0; j < J.n; ++j) J.conn[i][j] = build_theta_conn(J, i, j);
    for (int i = 0; i < J.n; ++i)
        for (int j = 0; j < J.n; ++j) {
            DiffForm r = exterior_d(J.conn[i][j]);
            for (int k = 0; k < J.n; ++k) r += wedge(J.conn[i][k], J.conn[k][j]);
            J.curv[i][j] = r;
        }
}

}  // namespace detail

inline DiffForm theta_conn(const JetBundle& J, int i, int j) {
    if (J.order < 2) throw Error("theta_conn: jet order must be at least 2");
    J.check_index(i);
    J.check_index(j);
    return J.conn[i][j];
}

/// R^i_j = d theta^i_j + theta^i_k theta^k_j; proportional to the base
/// differentials (horizontality).
inline DiffForm curvature(const JetBundle& J, int i, int j) {
    if (J.order < 2) throw Error("curvature: jet order must be at least 2");
    J.check_index(i);
    J.check_index(j);
    return J.curv[i][j];
}

/// Generic jet chart in dimension n at order k <= 2. For n == 1 the inverse
/// is the reciprocal of the declared-invertible y; for n >= 2 the inverse
/// entries are independent generators with the matrix-inverse differential
/// rule and the contraction identities to the Kronecker delta.
inline JetBundlePtr full_jet(int n, int k) {
    if (n < 1 || n > 3 || k < 1 || k > 2) throw Error("full jet chart: supported range is n <= 3, k <= 2");
    auto J = std::make_shared<JetBundle>();
    auto ch = std::make_shared<Chart>("full-jet[" + std::to_string(n) + "," + std::to_string(k) + "]");
    J->n = n;
    J->order = k;
    auto num = [](int v) { return std::to_string(v + 1); };

    std::vector<std::vector<SymId>> ysym(n, std::vector<SymId>(n));
    std::vector<std::vector<std::vector<SymId>>> y2sym;
    std::vector<std::vector<SymId>> bsym;

    for (int mu = 0; mu < n; ++mu) J->x.push_back(ch->add_symbol("x" + num(mu), SymbolKind::coordinate));
    for (int mu = 0; mu < n; ++mu)
        for (int i = 0; i < n; ++i) ysym[mu][i] = ch->add_symbol("y" + num(mu) + "_" + num(i), SymbolKind::jet);
    if (k >= 2) {
        y2sym.assign(n, std::vector<std::vector<SymId>>(n, std::vector<SymId>(n, kNoSym)));
        for (int mu = 0; mu < n; ++mu)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    SymId s = ch->add_symbol("y" + num(mu) + "_" + num(i) + num(j), SymbolKind::jet);
                    y2sym[mu][i][j] = y2sym[mu][j][i] = s;  // symmetric lower indices
                }
    }
    if (n == 1) {
        ch->set_invertible(ysym[0][0]);
    } else {
        bsym.assign(n, std::vector<SymId>(n));
        for (int i = 0; i < n; ++i)
            for (int mu = 0; mu < n; ++mu)
                bsym[i][mu] = ch->add_symbol("yinv" + num(i) + "_" + num(mu), SymbolKind::jet, false);
        // d(y^-1)^i_mu = -(y^-1)^i_rho d(y^rho_sigma) (y^-1)^sigma_mu
        for (int i = 0; i < n; ++i)
            for (int mu = 0; mu < n; ++mu) {
                RuleForm rule;
                for (int rho = 0; rho < n; ++rho)
                    for (int sigma = 0; sigma < n; ++sigma)
                        rule.push_back({-(Poly::var(bsym[i][rho]) * Poly::var(bsym[sigma][mu])),
                                        {ch->symbols[ysym[rho][sigma]].diff}});
                ch->set_diff_rule(bsym[i][mu], rule);
            }
        // (y^-1)^i_mu y^mu_j contracts to delta^i_j, oriented at the top index
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                ContractionRule rule;
                rule.lead_a = bsym[i][n - 1];
                rule.lead_b = ysym[n - 1][j];
                rule.rhs = Poly(i == j ? 1 : 0);
                for (int mu = 0; mu < n - 1; ++mu) rule.rhs -= Poly::var(bsym[i][mu]) * Poly::var(ysym[mu][j]);
                ch->add_contraction(std::move(rule));
            }
    }

    J->chart = ch;
    const ChartPtr& cp = J->chart;
    J->y.assign(n, std::vector<Coefficient>(n, Coefficient(cp, GaussianRational(0))));
    J->yinv = J->y;
    J->y2.assign(n, std::vector<std::vector<Coefficient>>(n, std::vector<Coefficient>(n, Coefficient(cp, GaussianRational(0)))));
    for (int mu = 0; mu < n; ++mu)
        for (int i = 0; i < n; ++i) J->y[mu][i] = Coefficient::var(cp, ysym[mu][i]);
    if (k >= 2)
        for (int mu = 0; mu < n; ++mu)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) J->y2[mu][i][j] = Coefficient::var(cp, y2sym[mu][i][j]);
    if (n == 1) {
        J->yinv[0][0] = Coefficient::var(cp, ysym[0][0], -1);
    } else {
        for (int i = 0; i < n; ++i)
            for (int mu = 0; mu < n; ++mu) J->yinv[i][mu] = Coefficient::var(cp, bsym[i][mu]);
    }
    for (int mu = 0; mu < n; ++mu) J->base_diffs.push_back(cp->symbols[J->x[mu]].diff);
    detail::build_geometry(*J);
    return J;
}

/// The order-2 jet chart restricted to holomorphic jets over the product of a
/// circle and a Riemann surface. Coordinates (z, zb, t) with the unit-circle
/// symbol w over t; the t-jets are frozen (y^t_t = 1, mixed jets zero), so the
/// jet matrix is triangular and its inverse stays rational.
/// Index order: 0 = z, 1 = zb, 2 = t.
struct HoloJet : JetBundle {
    SymId z = 0, zb = 0, t = 0, w = 0;
    SymId a = 0, ab = 0, p = 0, pb = 0;       // y^z_z, y^zb_zb, y^z_t, y^zb_t
    SymId azz = 0, abzz = 0, azt = 0, abzt = 0, att = 0, abtt = 0;
    FormId dz = 0, dzb = 0, dt = 0;
    int fs = -1;  // invertible 1 + z*zb
};

using HoloJetPtr = std::shared_ptr<const HoloJet>;

inline HoloJetPtr holo_jet_build(bool with_rotation, SymId* alpha_out = nullptr, SymId* ualpha_out = nullptr) {
    auto J = std::make_shared<HoloJet>();
    auto ch = std::make_shared<Chart>(with_rotation ? "holo-jet-rot" : "holo-jet");
    J->n = 3;
    J->order = 2;
    J->z = ch->add_symbol("z", SymbolKind::coordinate);
    J->zb = ch->add_symbol("zb", SymbolKind::coordinate);
    J->t = ch->add_symbol("t", SymbolKind::coordinate);
    J->w = ch->add_symbol("w", SymbolKind::circle, false);
    J->a = ch->add_symbol("yz_z", SymbolKind::jet);
    J->ab = ch->add_symbol("yzb_zb", SymbolKind::jet);
    J->p = ch->add_symbol("yz_t", SymbolKind::jet);
    J->pb = ch->add_symbol("yzb_t", SymbolKind::jet);
    J->azz = ch->add_symbol("yz_zz", SymbolKind::jet);
    J->abzz = ch->add_symbol("yzb_zbzb", SymbolKind::jet);
    J->azt = ch->add_symbol("yz_zt", SymbolKind::jet);
    J->abzt = ch->add_symbol("yzb_zbt", SymbolKind::jet);
    J->att = ch->add_symbol("yz_tt", SymbolKind::jet);
    J->abtt = ch->add_symbol("yzb_tt", SymbolKind::jet);

    for (SymId s : {J->z, J->zb, J->w, J->a, J->ab}) ch->set_invertible(s);
    ch->set_conj_pair(J->z, J->zb);
    ch->set_conj_pair(J->a, J->ab);
    ch->set_conj_pair(J->p, J->pb);
    ch->set_conj_pair(J->azz, J->abzz);
    ch->set_conj_pair(J->azt, J->abzt);
    ch->set_conj_pair(J->att, J->abtt);
    ch->set_conj_reciprocal(J->w);
    J->fs = ch->add_invertible_poly("one_plus_zzb", Poly(1) + Poly::var(J->z) * Poly::var(J->zb));
    {
        RuleForm dw;
        dw.push_back({Poly::term(Monomial::var(J->w), GaussianRational::i()), {ch->symbols[J->t].diff}});
        ch->set_diff_rule(J->w, dw);
    }
    SymId alpha = kNoSym, ualpha = kNoSym;
    if (with_rotation) {
        alpha = ch->add_symbol("alpha", SymbolKind::coordinate);
        ualpha = ch->add_symbol("ualpha", SymbolKind::circle, false);
        ch->set_invertible(ualpha);
        ch->set_conj_reciprocal(ualpha);
        RuleForm du;
        du.push_back({Poly::term(Monomial::var(ualpha), GaussianRational::i()), {ch->symbols[alpha].diff}});
        ch->set_diff_rule(ualpha, du);
    }
    if (alpha_out) *alpha_out = alpha;
    if (ualpha_out) *ualpha_out = ualpha;

    J->chart = ch;
    const ChartPtr& cp = J->chart;
    J->x = {J->z, J->zb, J->t};
    auto zero = Coefficient(cp, GaussianRational(0));
    auto one = Coefficient(cp, GaussianRational(1));
    J->y.assign(3, std::vector<Coefficient>(3, zero));
    J->yinv = J->y;
    J->y2.assign(3, std::vector<std::vector<Coefficient>>(3, std::vector<Coefficient>(3, zero)));
    auto v = [&](SymId s, int e = 1) { return Coefficient::var(cp, s, e); };
    J->y[0][0] = v(J->a);
    J->y[0][2] = v(J->p);
    J->y[1][1] = v(J->ab);
    J->y[1][2] = v(J->pb);
    J->y[2][2] = one;
    J->y2[0][0][0] = v(J->azz);
    J->y2[0][0][2] = J->y2[0][2][0] = v(J->azt);
    J->y2[0][2][2] = v(J->att);
    J->y2[1][1][1] = v(J->abzz);
    J->y2[1][1][2] = J->y2[1][2][1] = v(J->abzt);
    J->y2[1][2][2] = v(J->abtt);
    J->yinv[0][0] = v(J->a, -1);
    J->yinv[0][2] = -(v(J->p) * v(J->a, -1));
    J->yinv[1][1] = v(J->ab, -1);
    J->yinv[1][2] = -(v(J->pb) * v(J->ab, -1));
    J->yinv[2][2] = one;
    J->dz = cp->symbols[J->z].diff;
    J->dzb = cp->symbols[J->zb].diff;
    J->dt = cp->symbols[J->t].diff;
    J->base_diffs = {J->dz, J->dzb, J->dt};
    detail::build_geometry(*J);
    return J;
}

inline HoloJetPtr holo_jet() {
    static HoloJetPtr cached = holo_jet_build(false);
    return cached;
}

/// The Chern-Weil morphism: om^i_j -> theta^i_j, Om^i_j -> R^i_j, extended as
/// an algebra morphism. Intertwines d_W with the exterior differential.
inline DiffForm chern_weil(const WeilElement& a, const JetBundle& J) {
    if (J.order < 2) throw Error("chern-weil: jet order must be at least 2");
    if (a.alg->n != J.n)
        throw Error("chern-weil: matrix size " + std::to_string(a.alg->n) + " does not match chart dimension " +
                    std::to_string(J.n));
    DiffForm total(J.chart);
    for (const auto& [mono, c] : a.form.terms) {
        for (const auto& [m, q] : c.num.terms) {
            DiffForm t = DiffForm::scalar(J.chart, q);
            for (FormId f : mono.factors) {
                auto [i, j] = a.alg->om_index.at(f);
                t = wedge(t, J.conn[i][j]);
                if (t.is_zero()) break;
            }
            for (const auto& [id, e] : m.factors) {
                if (t.is_zero()) break;
                auto ij = [&](SymId s) {
                    int nn = a.alg->n;
                    return std::pair<int, int>(s / nn, s % nn);
                }(id);
                for (int rep = 0; rep < e; ++rep) t = wedge(t, J.curv[ij.first][ij.second]);
            }
            total += t;
        }
    }
    return total;
}

/// Restriction identity on the holomorphic chart: the full first Pontrjagin
/// form collapses to R^z_z R^zb_zb, all curvature entries outside the
/// holomorphic block vanish, and the two displayed expansions agree.
inline bool p1_identity_check(const HoloJet& J) {
    const DiffForm& Rz = J.curv[0][0];
    const DiffForm& Rzb = J.curv[1][1];
    DiffForm p1 = chern_weil(pontrjagin_class(1, 3), J);
    DiffForm rhs = wedge(Rz, Rzb);
    if (p1 != rhs) return false;
    DiffForm sum = Rz + Rzb;
    DiffForm half = (wedge(sum, sum) - wedge(Rz, Rz) - wedge(Rzb, Rzb)) * GaussianRational(Rational(1, 2));
    if (half != rhs) return false;
    // vanishing survey: only R^z_z, R^z_t, R^zb_zb, R^zb_t survive
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            bool expected_nonzero = (i == 0 && (j == 0 || j == 2)) || (i == 1 && (j == 1 || j == 2));
            if (J.curv[i][j].is_zero() == expected_nonzero) return false;
        }
    return true;
}

/// Infinitesimal rotation on the holomorphic chart: jets weighted by their
/// count of z-type lower indices (conjugates with the opposite sign).
inline VectorField rotation_field(const HoloJet& J) {
    VectorField v(J.chart);
    auto set = [&](SymId s, long weight) {
        v.set(s, Coefficient::var(J.chart, s) * GaussianRational{Rational(0), Rational(weight)});
    };
    set(J.a, 1);
    set(J.azz, 2);
    set(J.azt, 1);
    set(J.ab, -1);
    set(J.abzz, -2);
    set(J.abzt, -1);
    return v;
}

/// Finite rotation: the holomorphic chart mapped into its extension by a
/// fresh circle symbol, jets multiplied by the matching power of it.
struct RotationAction {
    HoloJetPtr extended;
    SymId alpha = kNoSym, ualpha = kNoSym;
    Substitution inclusion;  // identity on shared symbols
    Substitution rotation;   // y^z_z -> ualpha * y^z_z, etc.
};

inline RotationAction rotation_action(const HoloJetPtr& J) {
    RotationAction act;
    SymId alpha = kNoSym, ualpha = kNoSym;
    act.extended = holo_jet_build(true, &alpha, &ualpha);
    act.alpha = alpha;
    act.ualpha = ualpha;
    const ChartPtr& src = J->chart;
    const ChartPtr& dst = act.extended->chart;
    Substitution incl(src, dst);
    for (SymId s = 0; s < src->symbols.size(); ++s) incl.set(s, Coefficient::var(dst, s));
    act.inclusion = incl;
    Substitution rot = incl;
    auto u = [&](int power) { return Coefficient::var(dst, ualpha, power); };
    rot.set(J->a, Coefficient::var(dst, J->a) * u(1));
    rot.set(J->azz, Coefficient::var(dst, J->azz) * u(2));
    rot.set(J->azt, Coefficient::var(dst, J->azt) * u(1));
    rot.set(J->ab, Coefficient::var(dst, J->ab) * u(-1));
    rot.set(J->abzz, Coefficient::var(dst, J->abzz) * u(-2));
    rot.set(J->abzt, Coefficient::var(dst, J->abzt) * u(-1));
    act.rotation = rot;
    return act;
}

}  // namespace jetforms

#endif
