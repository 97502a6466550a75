#pragma once

#include "endotriv/endotriv.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace endotriv;

struct Fixture {
    std::string name;
    std::uint64_t p = 0;
    std::shared_ptr<const SubgroupLattice> lat;
    PSubposet poset;

    const SubgroupLattice& lattice() const { return *lat; }
    PosetView view() const { return {*lat, poset}; }
};

inline std::string builtin_of(const std::string& name)
{
    if (name == "C2") return "cyclic:2";
    if (name == "C3") return "cyclic:3";
    if (name == "C4") return "cyclic:4";
    if (name == "C5") return "cyclic:5";
    if (name == "C6") return "cyclic:6";
    if (name == "C8") return "cyclic:8";
    if (name == "C9") return "cyclic:9";
    if (name == "V4") return "klein";
    if (name == "C3xC3") return "elemab:3,2";
    if (name == "D8") return "dihedral:8";
    if (name == "Q8") return "quaternion:8";
    if (name == "S3") return "s3";
    if (name == "F20") return "frobenius:20";
    throw std::invalid_argument("unknown fixture " + name);
}

inline Fixture make(const std::string& name, std::uint64_t p)
{
    Fixture f;
    f.name = name;
    f.p = p;
    f.lat = std::make_shared<const SubgroupLattice>(builtin::from_spec(builtin_of(name)));
    f.poset = f.lat->p_subposet(p);
    return f;
}

/// (name, prime) for the p-group fixtures.
inline std::vector<std::pair<std::string, std::uint64_t>> p_groups()
{
    return {{"C2", 2}, {"C3", 3}, {"C4", 2}, {"C8", 2}, {"C9", 3}, {"V4", 2}, {"C3xC3", 3}, {"D8", 2}, {"Q8", 2}};
}

inline std::vector<std::pair<std::string, std::uint64_t>> all_groups()
{
    auto v = p_groups();
    v.insert(v.end(), {{"S3", 2}, {"S3", 3}, {"C6", 2}, {"C6", 3}, {"F20", 2}, {"F20", 5}});
    return v;
}

/// Subgroup index of the class representative at poset position i.
inline std::size_t rep(const Fixture& f, std::size_t i) { return f.lat->class_rep(f.poset.classes[i]); }

/// Position of the class of a subgroup given by its order among p-subgroups,
/// when that order determines the class.
inline std::size_t pos_of_order(const Fixture& f, std::size_t order)
{
    std::size_t found = SIZE_MAX;
    for (std::size_t i = 0; i < f.poset.size(); ++i)
        if (f.lat->subgroup(rep(f, i)).order() == order) {
            if (found != SIZE_MAX)
                throw std::logic_error("order does not determine the class");
            found = i;
        }
    return found;
}

inline SuperclassFn random_fn(std::mt19937_64& rng, const Fixture& f, long long lo, long long hi)
{
    std::uniform_int_distribution<long long> d(lo, hi);
    SuperclassFn out{f.p, {}};
    for (std::size_t i = 0; i < f.poset.size(); ++i)
        out.values.push_back(d(rng));
    return out;
}

inline SuperclassFn fn(std::uint64_t p, std::initializer_list<long long> v) { return superclass_fn(p, v); }


/// H <= G as a group of its own, with lattice and p-subposet.
struct Sub {
    EmbeddedSubgroup emb;
    std::shared_ptr<const SubgroupLattice> lat;
    PSubposet poset;
    PosetView view() const { return {*lat, poset}; }
};

Sub make_sub(EmbeddedSubgroup emb, std::uint64_t p)
{
    Sub s{std::move(emb), nullptr, {}};
    s.lat = std::make_shared<const SubgroupLattice>(s.emb.group);
    s.poset = s.lat->p_subposet(p);
    return s;
}

Sub sub_of(const fixtures::Fixture& f, std::size_t s) { return make_sub(subgroup_as_group(f.lat->group(), f.lat->subgroup(s)), f.p); }

/// K <= H <= G, with K embedded through H so both views share one K.
EmbeddedSubgroup compose(const EmbeddedSubgroup& outer, const EmbeddedSubgroup& inner)
{
    EmbeddedSubgroup e{inner.group, {}};
    for (auto x : inner.to_parent)
        e.to_parent.push_back(outer.to_parent[x]);
    return e;
}

/// G/N with lattice and p-subposet.
struct Quot {
    std::shared_ptr<const QuotientGroup> q;
    std::shared_ptr<const SubgroupLattice> lat;
    PSubposet poset;
    PosetView view() const { return {*lat, poset}; }
};

Quot make_quot(std::shared_ptr<const QuotientGroup> q, std::uint64_t p)
{
    Quot out{std::move(q), nullptr, {}};
    out.lat = std::make_shared<const SubgroupLattice>(out.q->group_ptr());
    out.poset = out.lat->p_subposet(p);
    return out;
}

Quot quot_of(const fixtures::Fixture& f, std::size_t n)
{
    return make_quot(std::make_shared<const QuotientGroup>(*f.lat, f.lat->whole(), n), f.p);
}

/// Subgroup index with the given order (first found, in lattice order).
std::size_t subgroup_of_order(const SubgroupLattice& lat, std::size_t order, std::size_t skip = 0)
{
    for (std::size_t s = 0; s < lat.size(); ++s)
        if (lat.subgroup(s).order() == order && skip-- == 0)
            return s;
    throw std::logic_error("no such subgroup");
}

std::vector<std::size_t> normal_subgroups(const SubgroupLattice& lat)
{
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < lat.size(); ++s)
        if (lat.is_normal_in(s, lat.whole()))
            out.push_back(s);
    return out;
}

std::vector<SuperclassFn> cfb_basis(const SubgroupLattice& lat, const PSubposet& poset)
{
    std::vector<SuperclassFn> out;
    for (const auto& v : cfb_lattice(lat, poset).basis_vectors())
        out.push_back({poset.p, v});
    return out;
}

bool is_borel_smith(const SubgroupLattice& lat, const PSubposet& poset, const SuperclassFn& f)
{
    return check(f, borel_smith_system(lat, poset)).pass;
}


/// Points any complex homotopy equivalent to the product of C_Q^{b_Q} must
/// have: homology dims at P = 1 multiply, and H(C_Q)(1) has dim |G:Q| - 1
/// (1 for the Sylow class, where C_Q = k[1]).
inline double homology_lower_bound(const Fixture& f, const IntVector& b)
{
    const auto n = static_cast<double>(f.lat->group().order());
    const auto sylow = f.poset.size() - 1;
    double lb = 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = i == sylow ? 1.0 : n / static_cast<double>(f.lat->subgroup(rep(f, i)).order()) - 1.0;
        lb *= std::pow(d, std::abs(static_cast<double>(b[i].convert_to<long long>())));
    }
    return lb;
}

} // namespace fixtures
