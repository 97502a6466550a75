#pragma once

#include "errors.hpp"
#include "subgroup_lattice.hpp"
#include "superclass.hpp"

#include <vector>

namespace endotriv {

/// A group seen through its subgroup lattice and p-subposet.
struct PosetView {
    const SubgroupLattice& lattice;
    const PSubposet& poset;

    /// Position in the p-subposet of the class of the subgroup with these members.
    std::size_t position_of(const std::vector<PermGroup::Index>& members) const
    {
        auto sorted = members;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        auto s = lattice.find_members(sorted);
        if (!s)
            throw ValidationError("element set is not a subgroup of the target group");
        auto pos = poset.position_of_class(lattice.class_of(*s));
        if (!pos)
            throw ValidationError("subgroup is not a p-subgroup");
        return *pos;
    }

    const Subgroup& rep(std::size_t pos) const { return lattice.subgroup(lattice.class_rep(poset.classes[pos])); }
};

namespace detail {

inline void require_fn(const PosetView& v, const SuperclassFn& f, const char* what)
{
    if (f.p != v.poset.p || f.size() != v.poset.size())
        throw ValidationError(std::string(what) + ": function does not match the source p-subposet");
}

inline void require_same_prime(const PosetView& a, const PosetView& b, const char* what)
{
    if (a.poset.p != b.poset.p)
        throw ValidationError(std::string(what) + ": groups viewed at different primes");
}

} // namespace detail

/// (res f)(L) = f(L) for L <= H; `h` embeds H (the group of h_view) in G.
inline SuperclassFn res(const PosetView& g_view, const EmbeddedSubgroup& h, const PosetView& h_view,
                        const SuperclassFn& f)
{
    detail::require_fn(g_view, f, "res");
    detail::require_same_prime(g_view, h_view, "res");
    SuperclassFn out{h_view.poset.p, {}};
    for (std::size_t i = 0; i < h_view.poset.size(); ++i) {
        std::vector<PermGroup::Index> members;
        for (auto x : h_view.rep(i).members)
            members.push_back(h.to_parent[x]);
        out.values.push_back(f[g_view.position_of(members)]);
    }
    return out;
}

/// (inf f)(L) = f(LN/N); q realizes G/N and q_view is its lattice.
inline SuperclassFn inf(const PosetView& g_view, const QuotientGroup& q, const PosetView& q_view,
                        const SuperclassFn& f)
{
    detail::require_fn(q_view, f, "inf");
    detail::require_same_prime(g_view, q_view, "inf");
    SuperclassFn out{g_view.poset.p, {}};
    for (std::size_t i = 0; i < g_view.poset.size(); ++i)
        out.values.push_back(f[q_view.position_of(q.image(g_view.rep(i)))]);
    return out;
}

/// (def f)(L/N) = f(L); N must be a p-group.
inline SuperclassFn def(const PosetView& g_view, const QuotientGroup& q, const PosetView& q_view,
                        const SuperclassFn& f)
{
    detail::require_fn(g_view, f, "def");
    detail::require_same_prime(g_view, q_view, "def");
    if (!is_power_of(q.normal_subgroup().order(), g_view.poset.p))
        throw ValidationError("def: normal subgroup is not a p-group");
    SuperclassFn out{q_view.poset.p, {}};
    for (std::size_t i = 0; i < q_view.poset.size(); ++i)
        out.values.push_back(f[g_view.position_of(q.preimage(q_view.rep(i).members))]);
    return out;
}

/// (ind f)(L) = sum over x in [L\G/H] of f(H cap x^-1 L x).
inline SuperclassFn ind(const PosetView& g_view, const EmbeddedSubgroup& h, const PosetView& h_view,
                        const SuperclassFn& f)
{
    detail::require_fn(h_view, f, "ind");
    detail::require_same_prime(g_view, h_view, "ind");
    const auto& g = g_view.lattice.group();
    std::vector<long> to_h(g.order(), -1);
    for (std::size_t i = 0; i < h.to_parent.size(); ++i)
        to_h[h.to_parent[i]] = static_cast<long>(i);

    SuperclassFn out{g_view.poset.p, {}};
    for (std::size_t i = 0; i < g_view.poset.size(); ++i) {
        const auto& l = g_view.rep(i);
        std::vector<bool> seen(g.order(), false);
        Integer total = 0;
        for (std::size_t x = 0; x < g.order(); ++x) {
            if (seen[x])
                continue;
            for (auto a : l.members)
                for (auto b : h.to_parent)
                    seen[g.mul(g.mul(a, x), b)] = true;
            std::vector<PermGroup::Index> meet;
            const auto xi = g.inv(x);
            for (auto a : l.members) {
                auto y = g.conj(xi, a);
                if (to_h[y] >= 0)
                    meet.push_back(static_cast<PermGroup::Index>(to_h[y]));
            }
            total += f[h_view.position_of(meet)];
        }
        out.values.push_back(total);
    }
    return out;
}

} // namespace endotriv
