#pragma once

#include "int_matrix.hpp"
#include "perm_group.hpp"
#include "subgroup_lattice.hpp"

#include <map>
#include <vector>

namespace endotriv {

/// Commutator subgroup [G, G].
inline Subgroup derived_subgroup(const PermGroup& g)
{
    std::vector<PermGroup::Index> commutators;
    for (std::size_t a = 0; a < g.order(); ++a)
        for (std::size_t b = 0; b < g.order(); ++b)
            commutators.push_back(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    std::sort(commutators.begin(), commutators.end());
    commutators.erase(std::unique(commutators.begin(), commutators.end()), commutators.end());
    return generate_subgroup(g, commutators);
}

/// Invariant factors of G/[G,G].
///
/// The abelianization is realized as a permutation group on cosets; a BFS
/// over it from the images of the generators of G assigns exponent vectors,
/// and every non-tree edge contributes one relation. The cokernel of the
/// relation matrix is G^ab.
inline AbelianInvariants abelianization(const PermGroup& g)
{
    Subgroup whole = generate_subgroup(g, [&] {
        std::vector<PermGroup::Index> gens;
        for (std::size_t k = 0; k < g.generators().size(); ++k)
            gens.push_back(g.generator_index(k));
        return gens;
    }());
    auto gp = std::make_shared<const PermGroup>(g);
    QuotientGroup ab(gp, whole, derived_subgroup(g));
    const std::size_t k = g.generators().size();

    std::vector<PermGroup::Index> gen_cosets;
    for (std::size_t i = 0; i < k; ++i)
        gen_cosets.push_back(static_cast<PermGroup::Index>(ab.coset_of(g.generator_index(i))));

    std::map<std::size_t, IntVector> vec;
    std::vector<std::size_t> queue{ab.coset_of(PermGroup::identity())};
    vec[queue.front()] = IntVector(k, 0);
    std::vector<IntVector> relations;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t a = queue[q];
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t b = ab.coset_mul(gen_cosets[i], a);
            IntVector step = vec[a];
            step[i] += 1;
            auto it = vec.find(b);
            if (it == vec.end()) {
                vec.emplace(b, step);
                queue.push_back(b);
            } else {
                IntVector rel(k);
                for (std::size_t j = 0; j < k; ++j)
                    rel[j] = step[j] - it->second[j];
                relations.push_back(std::move(rel));
            }
        }
    }
    return snf_invariants(IntMatrix::from_columns(k, relations));
}

/// Invariants of Hom(G, k^x) for k of characteristic p large enough: the
/// p'-part of G^ab.
inline AbelianInvariants hom_to_units_order(const PermGroup& g, std::uint64_t p)
{
    if (!is_prime(p))
        throw ValidationError("p = " + std::to_string(p) + " is not prime");
    auto ab = abelianization(g);
    AbelianInvariants out;
    for (Integer d : ab.torsion) {
        while (d % p == 0)
            d /= p;
        if (d > 1)
            out.torsion.push_back(d);
    }
    return out;
}

} // namespace endotriv
