#ifndef JETFORMS_COCHAIN_HPP
#define JETFORMS_COCHAIN_HPP

#include <functional>

#include "jetforms/group.hpp"

namespace jetforms {

/// Homogeneous cochain of bidegree (n, m): an equivariant map from (n+1)-tuples
/// of group words to m-forms. Values are memoized by the substitution ids of
/// the tuple; every rule built here factors through the substitutions.
class CochainRule {
public:
    int n = 0, m = 0;
    GroupSystemPtr G;
    std::function<DiffForm(const std::vector<GroupWord>&)> eval_fn;

    CochainRule() = default;
    CochainRule(int group_deg, int form_deg, GroupSystemPtr sys,
                std::function<DiffForm(const std::vector<GroupWord>&)> fn)
        : n(group_deg), m(form_deg), G(std::move(sys)), eval_fn(std::move(fn)),
          memo_(std::make_shared<std::map<std::vector<int>, DiffForm>>()) {}

    DiffForm operator()(const std::vector<GroupWord>& words) const {
        if (static_cast<int>(words.size()) != n + 1)
            throw Error("cochain rule: expected a tuple of " + std::to_string(n + 1) + " words");
        if (!memo_) memo_ = std::make_shared<std::map<std::vector<int>, DiffForm>>();
        std::vector<int> key = G->tuple_ids(words);
        auto it = memo_->find(key);
        if (it != memo_->end()) return it->second;
        DiffForm value = eval_fn(words);
        if (auto deg = value.degree(); !deg || (*deg != m && !value.is_zero()))
            throw Error("cochain rule: value degree does not match the declared bidegree");
        memo_->emplace(std::move(key), value);
        return value;
    }

    friend CochainRule operator+(const CochainRule& u, const CochainRule& v) {
        if (u.n != v.n || u.m != v.m) throw Error("cochain addition: bidegree mismatch");
        CochainRule r(u.n, u.m, u.G, nullptr);
        CochainRule uc = u, vc = v;
        r.eval_fn = [uc, vc](const std::vector<GroupWord>& words) { return uc(words) + vc(words); };
        return r;
    }
    friend CochainRule operator-(const CochainRule& u) {
        CochainRule r(u.n, u.m, u.G, nullptr);
        CochainRule uc = u;
        r.eval_fn = [uc](const std::vector<GroupWord>& words) { return -uc(words); };
        return r;
    }
    friend CochainRule operator*(const CochainRule& u, const GaussianRational& c) {
        CochainRule r(u.n, u.m, u.G, nullptr);
        CochainRule uc = u;
        r.eval_fn = [uc, c](const std::vector<GroupWord>& words) { return uc(words) * c; };
        return r;
    }

private:
    mutable std::shared_ptr<std::map<std::vector<int>, DiffForm>> memo_;
};

/// (delta u)(g_0,...,g_{n+1}) = (-)^m sum_i (-)^i u(..., omit g_i, ...)
inline CochainRule delta_simplicial(const CochainRule& u) {
    CochainRule r(u.n + 1, u.m, u.G, nullptr);
    CochainRule uc = u;
    int msign = (u.m % 2 == 0) ? 1 : -1;
    r.eval_fn = [uc, msign](const std::vector<GroupWord>& words) {
        DiffForm total(uc.G->chart());
        int sign = msign;
        for (std::size_t omit = 0; omit < words.size(); ++omit) {
            std::vector<GroupWord> sub;
            sub.reserve(words.size() - 1);
            for (std::size_t i = 0; i < words.size(); ++i)
                if (i != omit) sub.push_back(words[i]);
            DiffForm v = uc(sub);
            total += sign > 0 ? v : -v;
            sign = -sign;
        }
        return total;
    };
    return r;
}

/// (d u)(g_0,...,g_n) = d(u(g_0,...,g_n))
inline CochainRule d_cochain(const CochainRule& u) {
    CochainRule r(u.n, u.m + 1, u.G, nullptr);
    CochainRule uc = u;
    r.eval_fn = [uc](const std::vector<GroupWord>& words) { return exterior_d(uc(words)); };
    return r;
}

/// (u v)(g_0,...,g_{n+p}) = (-)^{n q} u(g_0,...,g_n) v(g_n,...,g_{n+p})
inline CochainRule cochain_product(const CochainRule& u, const CochainRule& v) {
    CochainRule r(u.n + v.n, u.m + v.m, u.G, nullptr);
    CochainRule uc = u, vc = v;
    int sign = (uc.n * vc.m) % 2 == 0 ? 1 : -1;
    r.eval_fn = [uc, vc, sign](const std::vector<GroupWord>& words) {
        std::vector<GroupWord> left(words.begin(), words.begin() + uc.n + 1);
        std::vector<GroupWord> right(words.begin() + uc.n, words.end());
        DiffForm w = wedge(uc(left), vc(right));
        return sign > 0 ? w : -w;
    };
    return r;
}

/// The constant unit 0-cochain.
inline CochainRule unit_cochain(const GroupSystemPtr& G) {
    return CochainRule(0, 0, G, [G](const std::vector<GroupWord>&) {
        return DiffForm::scalar(G->chart(), GaussianRational(1));
    });
}

/// A 0-cochain from a fixed form: alpha(g_0) = alpha pulled back by g_0.
inline CochainRule included_form(const GroupSystemPtr& G, const DiffForm& alpha, int degree) {
    return CochainRule(0, degree, G, [G, alpha](const std::vector<GroupWord>& words) {
        return pullback(G->eval(words[0]), alpha);
    });
}

/// Inhomogeneous group cochain on n-tuples.
class GroupCochain {
public:
    int n = 0, m = 0;
    GroupSystemPtr G;
    std::function<DiffForm(const std::vector<GroupWord>&)> eval_fn;

    DiffForm operator()(const std::vector<GroupWord>& words) const {
        if (static_cast<int>(words.size()) != n)
            throw Error("group cochain: expected a tuple of " + std::to_string(n) + " words");
        return eval_fn(words);
    }
};

/// f(g_1,...,g_n) = u(g_1...g_n, g_2...g_n, ..., g_n, 1)
inline GroupCochain to_group_cochain(const CochainRule& u) {
    GroupCochain f;
    f.n = u.n;
    f.m = u.m;
    f.G = u.G;
    CochainRule uc = u;
    f.eval_fn = [uc](const std::vector<GroupWord>& words) {
        std::vector<GroupWord> tuple;
        tuple.reserve(words.size() + 1);
        for (std::size_t i = 0; i < words.size(); ++i) {
            GroupWord prod;
            for (std::size_t j = i; j < words.size(); ++j) prod = prod * words[j];
            tuple.push_back(prod);
        }
        tuple.push_back(GroupWord::identity());
        return uc(tuple);
    };
    return f;
}

/// u(g_0,...,g_n) = f(g_0 g_1^-1, g_1 g_2^-1, ..., g_{n-1} g_n^-1) pulled back
/// by g_n; inverse of the reduction above.
inline CochainRule from_group_cochain(const GroupCochain& f) {
    GroupCochain fc = f;
    return CochainRule(f.n, f.m, f.G, [fc](const std::vector<GroupWord>& words) {
        std::vector<GroupWord> args;
        args.reserve(words.size() - 1);
        for (std::size_t i = 0; i + 1 < words.size(); ++i) args.push_back(words[i] * words[i + 1].inverse());
        return pullback(fc.G->eval(words.back()), fc(args));
    });
}

/// The inhomogeneous coboundary
/// (delta f)(g_1,...,g_{n+1}) = f(g_2,...) + sum (-)^i f(..., g_i g_{i+1}, ...)
///                              + (-)^{n+1} f(g_1,...,g_n) pulled back by g_{n+1}.
inline GroupCochain group_coboundary(const GroupCochain& f) {
    GroupCochain r;
    r.n = f.n + 1;
    r.m = f.m;
    r.G = f.G;
    GroupCochain fc = f;
    r.eval_fn = [fc](const std::vector<GroupWord>& words) {
        const int n = fc.n;
        DiffForm total(fc.G->chart());
        {
            std::vector<GroupWord> head(words.begin() + 1, words.end());
            total += fc(head);
        }
        int sign = -1;
        for (int i = 1; i <= n; ++i) {
            std::vector<GroupWord> merged;
            merged.reserve(n);
            for (int j = 0; j < static_cast<int>(words.size()); ++j) {
                if (j == i - 1) {
                    merged.push_back(words[j] * words[j + 1]);
                    ++j;
                } else {
                    merged.push_back(words[j]);
                }
            }
            DiffForm v = fc(merged);
            total += sign > 0 ? v : -v;
            sign = -sign;
        }
        {
            std::vector<GroupWord> head(words.begin(), words.end() - 1);
            DiffForm v = pullback(fc.G->eval(words.back()), fc(head));
            total += sign > 0 ? v : -v;
        }
        return total;
    };
    return r;
}

/// Finite sum of homogeneous cochains indexed by bidegree; the ambient object
/// for total-degree computations such as the equivariant curvature square.
class TotalCochain {
public:
    GroupSystemPtr G;
    std::map<std::pair<int, int>, CochainRule> parts;

    explicit TotalCochain(GroupSystemPtr sys) : G(std::move(sys)) {}

    void add_part(const CochainRule& r) {
        auto key = std::make_pair(r.n, r.m);
        auto it = parts.find(key);
        if (it == parts.end())
            parts.emplace(key, r);
        else
            it->second = it->second + r;
    }

    friend TotalCochain operator+(const TotalCochain& a, const TotalCochain& b) {
        TotalCochain r = a;
        for (const auto& [k, p] : b.parts) r.add_part(p);
        return r;
    }
    friend TotalCochain operator-(const TotalCochain& a) {
        TotalCochain r(a.G);
        for (const auto& [k, p] : a.parts) r.add_part(-p);
        return r;
    }
    friend TotalCochain operator-(const TotalCochain& a, const TotalCochain& b) { return a + (-b); }

    friend TotalCochain product(const TotalCochain& a, const TotalCochain& b) {
        TotalCochain r(a.G);
        for (const auto& [ka, pa] : a.parts)
            for (const auto& [kb, pb] : b.parts) r.add_part(cochain_product(pa, pb));
        return r;
    }

    /// (d + delta) applied componentwise.
    TotalCochain d_plus_delta() const {
        TotalCochain r(G);
        for (const auto& [k, p] : parts) {
            r.add_part(d_cochain(p));
            r.add_part(delta_simplicial(p));
        }
        return r;
    }
};

}  // namespace jetforms

#endif
