#pragma once

#include "abelianization.hpp"
#include "int_matrix.hpp"
#include "subgroup_lattice.hpp"
#include "superclass.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace endotriv {

/// One linear condition on superclass functions. `modulus == 0` marks an
/// equality, otherwise row . f = 0 mod modulus.
struct ConditionRow {
    enum class Kind { rank_two_relation, cyclic_congruence, quaternion_congruence, oriented_artin };

    Kind kind;
    IntVector row;
    Integer modulus;
    /// Subgroup indices of the generating configuration: (T, S) for the
    /// Borel-Smith rows, (L, K, H) for oriented Artin rows.
    std::vector<std::size_t> source;
    /// How many configurations produced this same row.
    std::size_t multiplicity = 1;

    bool is_equality() const { return modulus == 0; }

    static const char* kind_name(Kind k)
    {
        switch (k) {
        case Kind::rank_two_relation: return "rank-two-relation";
        case Kind::cyclic_congruence: return "cyclic-congruence";
        case Kind::quaternion_congruence: return "quaternion-congruence";
        default: return "oriented-artin";
        }
    }
};

struct ConditionSystem {
    std::uint64_t p = 0;
    std::size_t ambient = 0; // number of p-subgroup classes
    std::vector<ConditionRow> rows;

    std::vector<IntVector> equalities() const
    {
        std::vector<IntVector> out;
        for (const auto& r : rows)
            if (r.is_equality())
                out.push_back(r.row);
        return out;
    }

    std::vector<Congruence> congruences() const
    {
        std::vector<Congruence> out;
        for (const auto& r : rows)
            if (!r.is_equality())
                out.push_back({r.row, r.modulus});
        return out;
    }

    ConditionSystem merged_with(const ConditionSystem& other) const
    {
        ConditionSystem out = *this;
        out.rows.insert(out.rows.end(), other.rows.begin(), other.rows.end());
        return out;
    }
};

namespace detail {

inline void normalize_sign(IntVector& row)
{
    for (const auto& x : row) {
        if (x == 0)
            continue;
        if (x < 0)
            for (auto& y : row)
                y = -y;
        return;
    }
}

/// Adds a row unless an identical (row, modulus) is already present.
inline void add_condition(ConditionSystem& sys, ConditionRow row)
{
    normalize_sign(row.row);
    if (std::all_of(row.row.begin(), row.row.end(), [](const Integer& x) { return x == 0; }))
        return;
    for (auto& r : sys.rows)
        if (r.modulus == row.modulus && r.row == row.row) {
            ++r.multiplicity;
            return;
        }
    sys.rows.push_back(std::move(row));
}

inline std::size_t class_position(const SubgroupLattice& lat, const PSubposet& poset, std::size_t subgroup)
{
    auto pos = poset.position_of_class(lat.class_of(subgroup));
    if (!pos)
        throw ValidationError("subgroup is not a p-subgroup for this poset");
    return *pos;
}

/// The unique subgroup Y with S < Y <= T and |Y| = step * |S|, for T/S cyclic or Q8.
inline std::size_t unique_step_above(const SubgroupLattice& lat, std::size_t s, std::size_t t, std::size_t step)
{
    const std::size_t want = lat.subgroup(s).order() * step;
    std::size_t found = lat.size();
    for (std::size_t y = 0; y < lat.size(); ++y)
        if (lat.subgroup(y).order() == want && lat.includes(s, y) && lat.includes(y, t)) {
            if (found != lat.size())
                throw std::logic_error("unique_step_above: subgroup is not unique");
            found = y;
        }
    if (found == lat.size())
        throw std::logic_error("unique_step_above: no subgroup found");
    return found;
}

} // namespace detail

/// All Borel-Smith conditions over subquotients T/S of p-subgroups.
///
/// Every pair S normal in T of actual subgroups is visited; rows generated by
/// conjugate pairs coincide after mapping to classes and are merged.
inline ConditionSystem borel_smith_system(const SubgroupLattice& lat, const PSubposet& poset)
{
    const std::uint64_t p = poset.p;
    ConditionSystem sys;
    sys.p = p;
    sys.ambient = poset.size();
    auto pos = [&](std::size_t s) { return detail::class_position(lat, poset, s); };

    for (std::size_t t = 0; t < lat.size(); ++t) {
        if (!lat.is_p_subgroup(t, p))
            continue;
        for (std::size_t s = 0; s < lat.size(); ++s) {
            if (s == t || !lat.is_normal_in(s, t))
                continue;
            const std::size_t ratio = lat.subgroup(t).order() / lat.subgroup(s).order();
            const bool rank_two_candidate = ratio == p * p;
            const bool cyclic_p = ratio == p && p % 2 == 1;
            const bool cyclic_four = ratio == 4 && p == 2;
            const bool quaternion = ratio == 8 && p == 2;
            if (!(rank_two_candidate || cyclic_p || cyclic_four || quaternion))
                continue;
            const IsoType type = iso_type_small(quotient(lat, t, s));

            ConditionRow row;
            row.row = IntVector(poset.size(), 0);
            row.source = {t, s};
            if (type.kind == IsoType::Kind::elementary_abelian && type.rank == 2) {
                row.kind = ConditionRow::Kind::rank_two_relation;
                row.modulus = 0;
                row.row[pos(s)] += 1;
                row.row[pos(t)] += static_cast<long long>(p);
                for (std::size_t y = 0; y < lat.size(); ++y)
                    if (y != s && y != t && lat.includes(s, y) && lat.includes(y, t))
                        row.row[pos(y)] -= 1;
            } else if (type.kind == IsoType::Kind::cyclic && (cyclic_p || (cyclic_four && type.n == 4))) {
                row.kind = ConditionRow::Kind::cyclic_congruence;
                row.modulus = 2;
                const std::size_t hat = detail::unique_step_above(lat, s, t, p);
                row.row[pos(s)] += 1;
                row.row[pos(hat)] -= 1;
            } else if (type.kind == IsoType::Kind::quaternion8) {
                row.kind = ConditionRow::Kind::quaternion_congruence;
                row.modulus = 4;
                const std::size_t hat = detail::unique_step_above(lat, s, t, 2);
                row.row[pos(s)] += 1;
                row.row[pos(hat)] -= 1;
            } else {
                continue;
            }
            detail::add_condition(sys, std::move(row));
        }
    }
    return sys;
}

/// Oriented Artin congruences f(L) = f(K) mod 2 q^(r-l) over chains
/// L < K <= H <= N_G(L) with K a cyclic p-group, K/L of order p and H/K
/// cyclic of order q^r (q != p prime, r >= 1) acting on K/L with kernel of
/// order q^l.
///
/// Chains where H/K acts trivially on K/L (l = r) contribute nothing: for odd
/// p their mod-2 congruence is already a Borel-Smith row, and for p = 2 the
/// condition is vacuous.
inline ConditionSystem artin_system(const SubgroupLattice& lat, const PSubposet& poset)
{
    const std::uint64_t p = poset.p;
    const auto& g = lat.group();
    ConditionSystem sys;
    sys.p = p;
    sys.ambient = poset.size();
    auto pos = [&](std::size_t s) { return detail::class_position(lat, poset, s); };

    for (std::size_t k = 0; k < lat.size(); ++k) {
        const auto& ks = lat.subgroup(k);
        if (ks.order() == 1 || !lat.is_p_subgroup(k, p) || !lat.is_cyclic(k))
            continue;
        // L: the unique subgroup of index p in the cyclic group K.
        std::size_t below = lat.size();
        for (std::size_t c = 0; c < lat.size(); ++c)
            if (lat.subgroup(c).order() * p == ks.order() && lat.includes(c, k)) {
                below = c;
                break;
            }
        PermGroup::Index gen = 0;
        for (auto x : ks.members)
            if (g.element_order(x) == ks.order()) {
                gen = x;
                break;
            }
        const auto& ls = lat.subgroup(below);

        for (std::size_t h = 0; h < lat.size(); ++h) {
            if (h == k || !lat.is_normal_in(k, h) || !lat.includes(h, lat.normalizer(below)))
                continue;
            const std::size_t index = lat.subgroup(h).order() / ks.order();
            const std::uint64_t q = prime_power_base(index);
            if (q == 0 || q == p)
                continue;
            if (iso_type_small(quotient(lat, h, k)).kind != IsoType::Kind::cyclic)
                continue;
            std::size_t r = 0;
            for (std::size_t x = index; x > 1; x /= q)
                ++r;
            // Elements of H acting trivially on K/L, i.e. x gen x^-1 in gen L.
            std::size_t centralizing = 0;
            for (auto x : lat.subgroup(h).members) {
                auto c = g.conj(x, gen);
                if (ls.contains(g.mul(g.inv(gen), c)))
                    ++centralizing;
            }
            std::size_t l_exp = 0;
            for (std::size_t x = centralizing / ks.order(); x > 1; x /= q)
                ++l_exp;
            if (l_exp == r)
                continue;
            Integer modulus = 2;
            for (std::size_t e = 0; e < r - l_exp; ++e)
                modulus *= q;
            ConditionRow row;
            row.kind = ConditionRow::Kind::oriented_artin;
            row.modulus = modulus;
            row.row = IntVector(poset.size(), 0);
            row.row[pos(below)] += 1;
            row.row[pos(k)] -= 1;
            row.source = {below, k, h};
            detail::add_condition(sys, std::move(row));
        }
    }
    return sys;
}

struct CheckResult {
    bool pass = true;
    std::vector<std::size_t> violated; // row indices
};

inline CheckResult check(const SuperclassFn& f, const ConditionSystem& sys)
{
    if (f.size() != sys.ambient)
        throw ValidationError("check: superclass function has wrong length");
    CheckResult res;
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        const auto& r = sys.rows[i];
        Integer v = 0;
        for (std::size_t j = 0; j < f.size(); ++j)
            v += r.row[j] * f[j];
        const bool ok = r.is_equality() ? v == 0 : v % r.modulus == 0;
        if (!ok) {
            res.pass = false;
            res.violated.push_back(i);
        }
    }
    return res;
}

inline IntegerLattice condition_lattice(const ConditionSystem& sys)
{
    return solve_congruence_lattice(sys.ambient, sys.equalities(), sys.congruences());
}

/// CF_b(G, p).
inline IntegerLattice cfb_lattice(const SubgroupLattice& lat, const PSubposet& poset)
{
    return condition_lattice(borel_smith_system(lat, poset));
}

/// CF_{ba+}(G, p): Borel-Smith plus oriented Artin.
inline IntegerLattice cfba_lattice(const SubgroupLattice& lat, const PSubposet& poset)
{
    return condition_lattice(borel_smith_system(lat, poset).merged_with(artin_system(lat, poset)));
}

/// D^Omega(G) = CF(G, p) / CF_{ba+}(G, p).
inline AbelianInvariants dade_omega_invariants(const SubgroupLattice& lat, const PSubposet& poset)
{
    return lattice_quotient(poset.size(), cfba_lattice(lat, poset));
}

/// E_k(G) = Hom(G, k^x) + CF_b(G, p) (split).
inline AbelianInvariants classify_endotrivial_group(const SubgroupLattice& lat, const PSubposet& poset)
{
    AbelianInvariants out = hom_to_units_order(lat.group(), poset.p);
    out.free_rank = cfb_lattice(lat, poset).rank();
    return out;
}

/// Real representations of a cyclic p-group C_n.
struct RealRep {
    enum class Kind { trivial, sign, rotation };
    Kind kind = Kind::trivial;
    std::size_t j = 0; // rotation by 2 pi j / n

    static RealRep trivial() { return {Kind::trivial, 0}; }
    static RealRep sign() { return {Kind::sign, 0}; }
    static RealRep rotation(std::size_t j) { return {Kind::rotation, j}; }
};

/// Dimension function H -> dim V^H of a real representation of a cyclic p-group.
inline SuperclassFn real_dim_function_cyclic(const SubgroupLattice& lat, const PSubposet& poset, RealRep rep)
{
    const auto& g = lat.group();
    const std::size_t n = g.order();
    if (!lat.is_cyclic(lat.whole()) || !is_power_of(n, poset.p))
        throw ValidationError("real_dim_function_cyclic: group is not a cyclic p-group");
    if (rep.kind == RealRep::Kind::sign && n % 2 != 0)
        throw ValidationError("real_dim_function_cyclic: sign representation needs even order");
    if (rep.kind == RealRep::Kind::rotation && (rep.j == 0 || rep.j >= n))
        throw ValidationError("real_dim_function_cyclic: rotation index must satisfy 1 <= j < n");
    SuperclassFn f{poset.p, IntVector(poset.size(), 0)};
    for (std::size_t i = 0; i < poset.size(); ++i) {
        const std::size_t d = lat.subgroup(lat.class_rep(poset.classes[i])).order();
        switch (rep.kind) {
        case RealRep::Kind::trivial: f[i] = 1; break;
        case RealRep::Kind::sign: f[i] = (n / d) % 2 == 0 ? 1 : 0; break;
        case RealRep::Kind::rotation: f[i] = rep.j % d == 0 ? 2 : 0; break;
        }
    }
    return f;
}

} // namespace endotriv
