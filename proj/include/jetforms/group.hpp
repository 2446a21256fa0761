#ifndef JETFORMS_GROUP_HPP
#define JETFORMS_GROUP_HPP

#include "jetforms/jets.hpp"
#include "jetforms/sexpr.hpp"

namespace jetforms {

/// Word over declared generators and their formal inverses; the empty word is
/// the identity.
struct GroupWord {
    struct Letter {
        int gen;
        bool inverse;
        friend bool operator==(const Letter&, const Letter&) = default;
    };
    std::vector<Letter> letters;

    static GroupWord identity() { return {}; }
    static GroupWord gen(int g, bool inv = false) { return {{{g, inv}}}; }

    bool is_identity_word() const { return letters.empty(); }
    int length() const { return static_cast<int>(letters.size()); }

    friend GroupWord operator*(const GroupWord& u, const GroupWord& v) {
        GroupWord r = u;
        r.letters.insert(r.letters.end(), v.letters.begin(), v.letters.end());
        return r;
    }
    GroupWord inverse() const {
        GroupWord r;
        for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back({it->gen, !it->inverse});
        return r;
    }
    friend bool operator==(const GroupWord&, const GroupWord&) = default;

    std::string key() const {
        std::string s;
        for (const auto& l : letters) {
            s += std::to_string(l.gen);
            s += l.inverse ? '-' : '+';
        }
        return s;
    }
};

/// Conformal fiber-preserving diffeomorphism given by z -> Z(z, t) with an
/// explicitly declared inverse; carries the cached order-2 prolongation of
/// both directions to the holomorphic jet chart.
struct Diffeo {
    std::string name;
    Coefficient z_image;      // z after the map
    Coefficient z_image_inv;  // z after the declared inverse
    Substitution forward;     // prolonged
    Substitution backward;    // prolonged
};

namespace detail {

inline Coefficient d_component(const Coefficient& c, FormId f) {
    return exterior_d(c).coefficient_of(FormMono{{f}});
}

/// Order-2 prolongation of z -> Z (and its conjugate) to the holomorphic jet
/// chart, by the chain rule through second order.
inline Substitution prolong(const HoloJetPtr& J, const Coefficient& Z) {
    const ChartPtr& ch = J->chart;
    if (Z.mentions(J->zb)) throw Error("diffeo: z-image must not mention zb (conformality)");
    for (SymId s : {J->a, J->ab, J->p, J->pb, J->azz, J->abzz, J->azt, J->abzt, J->att, J->abtt})
        if (Z.mentions(s)) throw Error("diffeo: z-image must be a base expression");

    Coefficient Zz = d_component(Z, J->dz);
    Coefficient Zt = d_component(Z, J->dt);
    Coefficient Zzz = d_component(Zz, J->dz);
    Coefficient Zzt = d_component(Zz, J->dt);
    Coefficient Ztt = d_component(Zt, J->dt);
    std::string why;
    if (!Zz.try_inverse(&why)) throw Error("diffeo: derivative of the z-image is not invertible: " + why);

    auto v = [&](SymId s) { return Coefficient::var(ch, s); };
    Substitution S(ch, ch);
    S.set(J->z, Z);
    S.set(J->zb, conj(Z));
    S.set(J->t, v(J->t));
    S.set(J->w, v(J->w));
    S.set(J->a, Zz * v(J->a));
    S.set(J->p, Zz * v(J->p) + Zt);
    S.set(J->azz, Zz * v(J->azz) + Zzz * v(J->a) * v(J->a));
    S.set(J->azt, Zz * v(J->azt) + Zzz * v(J->a) * v(J->p) + Zzt * v(J->a));
    S.set(J->att, Zz * v(J->att) + Zzz * v(J->p) * v(J->p) + Zzt * v(J->p) * GaussianRational(2) + Ztt);
    S.set(J->ab, conj(Zz) * v(J->ab));
    S.set(J->pb, conj(Zz) * v(J->pb) + conj(Zt));
    S.set(J->abzz, conj(Zz) * v(J->abzz) + conj(Zzz) * v(J->ab) * v(J->ab));
    S.set(J->abzt, conj(Zz) * v(J->abzt) + conj(Zzz) * v(J->ab) * v(J->pb) + conj(Zzt) * v(J->ab));
    S.set(J->abtt, conj(Zz) * v(J->abtt) + conj(Zzz) * v(J->pb) * v(J->pb) + conj(Zzt) * v(J->pb) * GaussianRational(2) +
                       conj(Ztt));
    return S;
}

}  // namespace detail

inline Diffeo make_diffeo(const HoloJetPtr& J, std::string name, Coefficient z_image, Coefficient z_image_inv) {
    Diffeo d;
    d.name = std::move(name);
    d.z_image = std::move(z_image);
    d.z_image_inv = std::move(z_image_inv);
    d.forward = detail::prolong(J, d.z_image);
    d.backward = detail::prolong(J, d.z_image_inv);
    if (!compose(d.forward, d.backward).is_identity() || !compose(d.backward, d.forward).is_identity())
        throw Error("diffeo '" + d.name + "': declared inverse does not invert the map");
    return d;
}

/// Declared generators acting on the holomorphic jet chart, with interned
/// word evaluations. Group cochain rules evaluate words through this table.
class GroupSystem {
public:
    HoloJetPtr J;
    std::vector<Diffeo> gens;

    GroupSystem(HoloJetPtr bundle, std::vector<Diffeo> generators)
        : J(std::move(bundle)), gens(std::move(generators)) {}

    const ChartPtr& chart() const { return J->chart; }

    /// Substitution of a word: letters act left to right (pullback order).
    const Substitution& eval(const GroupWord& word) const {
        auto it = word_cache_.find(word.key());
        if (it != word_cache_.end()) return substs_[it->second];
        Substitution S = Substitution::identity(J->chart);
        for (const auto& l : word.letters) {
            const Diffeo& g = gens.at(l.gen);
            S = compose(S, l.inverse ? g.backward : g.forward);
        }
        int id = intern(std::move(S));
        word_cache_.emplace(word.key(), id);
        return substs_[id];
    }

    /// Identifier of the word's substitution normal form; words with the same
    /// action share the id.
    int subst_id(const GroupWord& word) const {
        eval(word);
        return word_cache_.at(word.key());
    }

    std::vector<int> tuple_ids(const std::vector<GroupWord>& words) const {
        std::vector<int> ids;
        ids.reserve(words.size());
        for (const auto& w : words) ids.push_back(subst_id(w));
        return ids;
    }

    /// All words of length <= max_len over the generators and their inverses.
    std::vector<GroupWord> words_up_to(int max_len) const {
        std::vector<GroupWord> out{GroupWord::identity()};
        std::size_t level_begin = 0;
        for (int len = 1; len <= max_len; ++len) {
            std::size_t level_end = out.size();
            for (std::size_t i = level_begin; i < level_end; ++i)
                for (int g = 0; g < static_cast<int>(gens.size()); ++g)
                    for (bool inv : {false, true}) out.push_back(out[i] * GroupWord::gen(g, inv));
            level_begin = level_end;
        }
        return out;
    }

private:
    int intern(Substitution S) const {
        for (std::size_t i = 0; i < substs_.size(); ++i)
            if (substs_[i] == S) return static_cast<int>(i);
        substs_.push_back(std::move(S));
        return static_cast<int>(substs_.size()) - 1;
    }

    mutable std::map<std::string, int> word_cache_;
    mutable std::vector<Substitution> substs_;
};

using GroupSystemPtr = std::shared_ptr<const GroupSystem>;

/// z -> w^n / z (an involution); the loop of conformal inversions.
inline Diffeo inversion_diffeo(const HoloJetPtr& J, const std::string& name, int n) {
    Coefficient Z = Coefficient::var(J->chart, J->w, n) * Coefficient::var(J->chart, J->z, -1);
    return make_diffeo(J, name, Z, Z);
}

/// z -> w z, the rotation loop.
inline Diffeo rotation_diffeo(const HoloJetPtr& J, const std::string& name = "rot") {
    Coefficient Z = Coefficient::var(J->chart, J->w) * Coefficient::var(J->chart, J->z);
    Coefficient Zi = Coefficient::var(J->chart, J->w, -1) * Coefficient::var(J->chart, J->z);
    return make_diffeo(J, name, Z, Zi);
}

inline GroupSystemPtr inversion_pair(const HoloJetPtr& J, int n1, int n2) {
    std::vector<Diffeo> gens;
    gens.push_back(inversion_diffeo(J, "g1", n1));
    gens.push_back(inversion_diffeo(J, "g2", n2));
    return std::make_shared<GroupSystem>(J, std::move(gens));
}

/// Generator declaration in the s-expression format:
///   (generator <name> (z <coefficient>) (zinv <coefficient>))
inline Diffeo parse_generator(const HoloJetPtr& J, const std::string& text) {
    Sexpr e = sexpr::parse(text);
    if (!e.head_is("generator") || e.size() < 4) throw Error("generator declaration: expected (generator name (z ...) (zinv ...))");
    std::string name = e.at(1).as_atom();
    Coefficient Z, Zi;
    bool have_z = false, have_zi = false;
    for (std::size_t i = 2; i < e.size(); ++i) {
        const Sexpr& part = e.at(i);
        if (part.head_is("z")) {
            Z = sexpr::to_coefficient(part.at(1), J->chart);
            have_z = true;
        } else if (part.head_is("zinv")) {
            Zi = sexpr::to_coefficient(part.at(1), J->chart);
            have_zi = true;
        }
    }
    if (!have_z || !have_zi) throw Error("generator declaration: missing z or zinv");
    return make_diffeo(J, name, Z, Zi);
}

}  // namespace jetforms

#endif
