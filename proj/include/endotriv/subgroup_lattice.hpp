#pragma once

#include "errors.hpp"
#include "integer.hpp"
#include "perm_group.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace endotriv {

/// Dense bitset over the element indices of a group.
class ElementSet {
public:
    ElementSet() = default;
    explicit ElementSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t universe() const { return universe_; }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool subset_of(const ElementSet& other) const
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & ~other.words_[k])
                return false;
        return true;
    }

    std::vector<PermGroup::Index> members() const
    {
        std::vector<PermGroup::Index> out;
        for (std::size_t i = 0; i < universe_; ++i)
            if (contains(i))
                out.push_back(static_cast<PermGroup::Index>(i));
        return out;
    }

    friend bool operator==(const ElementSet&, const ElementSet&) = default;
    friend auto operator<=>(const ElementSet& a, const ElementSet& b) { return a.words_ <=> b.words_; }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Subgroup {
    std::vector<PermGroup::Index> members; // sorted
    ElementSet mask;
    std::vector<PermGroup::Index> generators;

    std::size_t order() const { return members.size(); }
    bool contains(std::size_t g) const { return mask.contains(g); }
};

/// Subgroup generated by `gens` inside `g`.
inline Subgroup generate_subgroup(const PermGroup& g, std::vector<PermGroup::Index> gens)
{
    Subgroup s;
    s.mask = ElementSet(g.order());
    s.mask.insert(PermGroup::identity());
    std::vector<PermGroup::Index> queue{PermGroup::identity()};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        for (auto x : gens) {
            auto y = g.mul(x, queue[i]);
            if (!s.mask.contains(y)) {
                s.mask.insert(y);
                queue.push_back(y);
            }
        }
    }
    s.members = s.mask.members();
    gens.erase(std::remove(gens.begin(), gens.end(), PermGroup::identity()), gens.end());
    s.generators = std::move(gens);
    return s;
}

inline Subgroup subgroup_from_members(const PermGroup& g, const std::vector<PermGroup::Index>& members)
{
    ElementSet mask(g.order());
    for (auto m : members)
        mask.insert(m);
    // Greedy generating set: add any member not yet in the span.
    std::vector<PermGroup::Index> gens;
    Subgroup span = generate_subgroup(g, {});
    for (auto m : mask.members()) {
        if (!span.contains(m)) {
            gens.push_back(m);
            span = generate_subgroup(g, gens);
        }
    }
    if (span.mask != mask)
        throw ValidationError("element set is not closed under multiplication");
    return span;
}

struct LatticeLimits {
    std::size_t subgroup_cap = 10000;
};

/// Conjugacy classes of p-subgroups with the subconjugacy order, in canonical
/// order (ascending subgroup order, then first-discovered representative).
struct PSubposet {
    std::uint64_t p = 0;
    std::vector<std::size_t> classes; // indices into SubgroupLattice classes
    std::vector<std::vector<bool>> leq;

    std::size_t size() const { return classes.size(); }

    std::optional<std::size_t> position_of_class(std::size_t lattice_class) const
    {
        auto it = std::find(classes.begin(), classes.end(), lattice_class);
        if (it == classes.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - classes.begin());
    }
};

/// All subgroups of a permutation group, with conjugacy classes,
/// normalizers and the subconjugacy relation on class representatives.
///
/// Subgroups are found bottom-up: every cyclic subgroup, then joins with
/// cyclic subgroups until no new subgroup appears. They are stored sorted by
/// ascending order, ties by discovery index; classes inherit this order
/// through their first member, which is the class representative.
class SubgroupLattice {
public:
    explicit SubgroupLattice(std::shared_ptr<const PermGroup> group, const LatticeLimits& limits = {})
        : group_(std::move(group))
    {
        discover(limits);
        build_classes();
        build_subconjugacy();
    }

    explicit SubgroupLattice(PermGroup group, const LatticeLimits& limits = {})
        : SubgroupLattice(std::make_shared<const PermGroup>(std::move(group)), limits)
    {
    }

    const PermGroup& group() const { return *group_; }
    const std::shared_ptr<const PermGroup>& group_ptr() const { return group_; }

    std::size_t size() const { return subgroups_.size(); }
    const Subgroup& subgroup(std::size_t i) const { return subgroups_[i]; }
    const std::vector<Subgroup>& subgroups() const { return subgroups_; }

    bool includes(std::size_t inner, std::size_t outer) const
    {
        return subgroups_[inner].mask.subset_of(subgroups_[outer].mask);
    }

    std::size_t trivial() const { return 0; }
    std::size_t whole() const { return subgroups_.size() - 1; }

    std::size_t class_count() const { return classes_.size(); }
    std::size_t class_of(std::size_t subgroup) const { return class_of_[subgroup]; }
    const std::vector<std::size_t>& class_members(std::size_t c) const { return classes_[c]; }
    std::size_t class_rep(std::size_t c) const { return classes_[c].front(); }
    std::size_t normalizer(std::size_t subgroup) const { return normalizer_[subgroup]; }
    /// class c1 <=_G class c2
    bool subconjugate(std::size_t c1, std::size_t c2) const { return subconj_[c1][c2]; }

    std::optional<std::size_t> find(const ElementSet& mask) const
    {
        auto it = index_.find(mask);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::optional<std::size_t> find_members(const std::vector<PermGroup::Index>& members) const
    {
        ElementSet mask(group_->order());
        for (auto m : members)
            mask.insert(m);
        return find(mask);
    }

    /// Index of g S g^-1.
    std::size_t conjugate(std::size_t subgroup, std::size_t g) const
    {
        ElementSet mask(group_->order());
        for (auto m : subgroups_[subgroup].members)
            mask.insert(group_->conj(g, m));
        return *find(mask);
    }

    bool is_normal_in(std::size_t n, std::size_t h) const
    {
        return includes(n, h) && includes(h, normalizer_[n]);
    }

    bool is_p_subgroup(std::size_t subgroup, std::uint64_t p) const
    {
        return is_power_of(subgroups_[subgroup].order(), p);
    }

    bool is_cyclic(std::size_t subgroup) const
    {
        const auto& s = subgroups_[subgroup];
        return std::any_of(s.members.begin(), s.members.end(),
                           [&](auto m) { return group_->element_order(m) == s.order(); });
    }

    PSubposet p_subposet(std::uint64_t p) const
    {
        if (!is_prime(p))
            throw ValidationError("p = " + std::to_string(p) + " is not prime");
        PSubposet out;
        out.p = p;
        for (std::size_t c = 0; c < class_count(); ++c)
            if (is_p_subgroup(class_rep(c), p))
                out.classes.push_back(c);
        out.leq.assign(out.size(), std::vector<bool>(out.size(), false));
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = 0; j < out.size(); ++j)
                out.leq[i][j] = subconj_[out.classes[i]][out.classes[j]];
        return out;
    }

private:
    void discover(const LatticeLimits& limits)
    {
        const auto& g = *group_;
        std::vector<Subgroup> found;
        std::map<ElementSet, std::size_t> seen;
        auto add = [&](Subgroup s) {
            if (seen.emplace(s.mask, found.size()).second) {
                found.push_back(std::move(s));
                if (found.size() > limits.subgroup_cap)
                    throw BudgetExceeded("subgroup count exceeds cap " + std::to_string(limits.subgroup_cap));
            }
        };
        for (std::size_t x = 0; x < g.order(); ++x)
            add(generate_subgroup(g, {static_cast<PermGroup::Index>(x)}));
        std::vector<std::size_t> cyclic(found.size());
        std::iota(cyclic.begin(), cyclic.end(), 0);
        for (std::size_t i = 0; i < found.size(); ++i) {
            for (auto c : cyclic) {
                if (found[c].mask.subset_of(found[i].mask))
                    continue;
                auto gens = found[i].generators;
                gens.push_back(found[c].generators.empty() ? PermGroup::identity() : found[c].generators.front());
                Subgroup joined = generate_subgroup(g, std::move(gens));
                if (!seen.contains(joined.mask))
                    add(std::move(joined));
            }
        }
        std::vector<std::size_t> order(found.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](auto a, auto b) { return found[a].order() < found[b].order(); });
        for (auto i : order) {
            index_.emplace(found[i].mask, subgroups_.size());
            subgroups_.push_back(std::move(found[i]));
        }
    }

    void build_classes()
    {
        const auto& g = *group_;
        const std::size_t none = static_cast<std::size_t>(-1);
        class_of_.assign(size(), none);
        normalizer_.assign(size(), none);
        for (std::size_t s = 0; s < size(); ++s) {
            if (class_of_[s] != none)
                continue;
            const std::size_t c = classes_.size();
            classes_.emplace_back();
            std::vector<std::size_t> transporter(size(), none);
            std::vector<PermGroup::Index> norm;
            for (std::size_t x = 0; x < g.order(); ++x) {
                auto t = conjugate(s, x);
                if (t == s)
                    norm.push_back(static_cast<PermGroup::Index>(x));
                if (class_of_[t] == none) {
                    class_of_[t] = c;
                    transporter[t] = x;
                    classes_[c].push_back(t);
                }
            }
            std::sort(classes_[c].begin(), classes_[c].end());
            auto n_rep = *find_members(norm);
            for (auto t : classes_[c])
                normalizer_[t] = conjugate(n_rep, transporter[t]);
        }
    }

    void build_subconjugacy()
    {
        subconj_.assign(class_count(), std::vector<bool>(class_count(), false));
        for (std::size_t a = 0; a < class_count(); ++a)
            for (std::size_t b = 0; b < class_count(); ++b)
                for (auto m : classes_[a])
                    if (includes(m, class_rep(b))) {
                        subconj_[a][b] = true;
                        break;
                    }
    }

    std::shared_ptr<const PermGroup> group_;
    std::vector<Subgroup> subgroups_;
    std::map<ElementSet, std::size_t> index_;
    std::vector<std::vector<std::size_t>> classes_;
    std::vector<std::size_t> class_of_;
    std::vector<std::size_t> normalizer_;
    std::vector<std::vector<bool>> subconj_;
};

/// The subquotient H/N of a group, with a faithful permutation realization
/// given by the left regular action of H on its N-cosets.
class QuotientGroup {
public:
    QuotientGroup(const SubgroupLattice& lattice, std::size_t h, std::size_t n)
        : parent_(lattice.group_ptr()), h_(lattice.subgroup(h)), n_(lattice.subgroup(n))
    {
        if (!lattice.is_normal_in(n, h))
            throw ValidationError("quotient: subgroup is not normal");
        build();
    }

    QuotientGroup(std::shared_ptr<const PermGroup> parent, Subgroup h, Subgroup n)
        : parent_(std::move(parent)), h_(std::move(h)), n_(std::move(n))
    {
        const auto& g = *parent_;
        for (auto x : n_.members)
            if (!h_.contains(x))
                throw ValidationError("quotient: N is not contained in H");
        for (auto x : h_.generators)
            for (auto m : n_.members)
                if (!n_.contains(g.conj(x, m)))
                    throw ValidationError("quotient: subgroup is not normal");
        build();
    }

    const PermGroup& parent() const { return *parent_; }
    const Subgroup& numerator() const { return h_; }
    const Subgroup& normal_subgroup() const { return n_; }

    std::size_t order() const { return cosets_.size(); }
    const std::vector<std::vector<PermGroup::Index>>& cosets() const { return cosets_; }
    PermGroup::Index coset_rep(std::size_t c) const { return cosets_[c].front(); }

    /// Coset index of a parent element; the element must lie in H.
    std::size_t coset_of(std::size_t g) const
    {
        if (coset_of_[g] < 0)
            throw ValidationError("quotient: element is outside the numerator subgroup");
        return static_cast<std::size_t>(coset_of_[g]);
    }

    std::size_t coset_mul(std::size_t a, std::size_t b) const { return table_[a * order() + b]; }

    const PermGroup& group() const { return *realized_; }
    const std::shared_ptr<const PermGroup>& group_ptr() const { return realized_; }

    PermGroup::Index element_of_coset(std::size_t c) const { return coset_to_elem_[c]; }
    std::size_t coset_of_element(std::size_t q) const { return elem_to_coset_[q]; }
    /// Image of a parent element of H in the realized quotient group.
    PermGroup::Index project(std::size_t g) const { return coset_to_elem_[coset_of(g)]; }
    /// A parent element mapping to quotient element q.
    PermGroup::Index lift(std::size_t q) const { return coset_rep(elem_to_coset_[q]); }

    /// Image SN/N of a parent subgroup S <= H, as elements of the realized quotient.
    std::vector<PermGroup::Index> image(const Subgroup& s) const
    {
        ElementSet out(order());
        for (auto x : s.members)
            out.insert(project(x));
        return out.members();
    }

    /// Full preimage in the parent of a set of quotient elements.
    std::vector<PermGroup::Index> preimage(const std::vector<PermGroup::Index>& quotient_elems) const
    {
        std::vector<PermGroup::Index> out;
        for (auto q : quotient_elems)
            for (auto x : cosets_[elem_to_coset_[q]])
                out.push_back(x);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void build()
    {
        const auto& g = *parent_;
        coset_of_.assign(g.order(), -1);
        for (auto x : h_.members) {
            if (coset_of_[x] >= 0)
                continue;
            std::vector<PermGroup::Index> coset;
            for (auto m : n_.members)
                coset.push_back(g.mul(x, m));
            std::sort(coset.begin(), coset.end());
            for (auto y : coset)
                coset_of_[y] = static_cast<long>(cosets_.size());
            cosets_.push_back(std::move(coset));
        }
        const std::size_t k = order();
        table_.resize(k * k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                table_[a * k + b] = static_cast<std::size_t>(coset_of_[g.mul(coset_rep(a), coset_rep(b))]);

        auto perm_of = [&](std::size_t a) {
            Perm p(k);
            for (std::size_t i = 0; i < k; ++i)
                p[i] = static_cast<std::uint32_t>(table_[a * k + i]);
            return p;
        };
        std::vector<Perm> gens;
        for (auto x : h_.generators)
            gens.push_back(perm_of(static_cast<std::size_t>(coset_of_[x])));
        realized_ = std::make_shared<const PermGroup>(
            PermGroup::generate(k, std::move(gens), GroupLimits{std::max<std::size_t>(k, 1)}));
        coset_to_elem_.resize(k);
        elem_to_coset_.resize(k);
        for (std::size_t a = 0; a < k; ++a) {
            auto q = *realized_->index_of(perm_of(a));
            coset_to_elem_[a] = q;
            elem_to_coset_[q] = a;
        }
    }

    std::shared_ptr<const PermGroup> parent_;
    Subgroup h_;
    Subgroup n_;
    std::vector<std::vector<PermGroup::Index>> cosets_;
    std::vector<long> coset_of_;
    std::vector<std::size_t> table_;
    std::shared_ptr<const PermGroup> realized_;
    std::vector<PermGroup::Index> coset_to_elem_;
    std::vector<std::size_t> elem_to_coset_;
};

inline QuotientGroup quotient(const SubgroupLattice& lattice, std::size_t h, std::size_t n)
{
    return QuotientGroup(lattice, h, n);
}

/// Coarse isomorphism type, enough to sort subquotients into the
/// Borel-Smith cases.
struct IsoType {
    enum class Kind { cyclic, elementary_abelian, quaternion8, other };
    Kind kind = Kind::other;
    std::size_t n = 0;    // group order
    std::uint64_t p = 0;  // elementary abelian prime
    std::size_t rank = 0; // elementary abelian rank

    friend bool operator==(const IsoType&, const IsoType&) = default;

    static IsoType cyclic(std::size_t n) { return {Kind::cyclic, n, 0, 0}; }
    static IsoType elementary_abelian(std::uint64_t p, std::size_t rank)
    {
        std::size_t n = 1;
        for (std::size_t i = 0; i < rank; ++i)
            n *= p;
        return {Kind::elementary_abelian, n, p, rank};
    }
    static IsoType quaternion8() { return {Kind::quaternion8, 8, 0, 0}; }
    static IsoType other(std::size_t n) { return {Kind::other, n, 0, 0}; }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::cyclic: return "cyclic(" + std::to_string(n) + ")";
        case Kind::elementary_abelian:
            return "elementary-abelian(" + std::to_string(p) + "," + std::to_string(rank) + ")";
        case Kind::quaternion8: return "quaternion8";
        default: return "other";
        }
    }
};

inline IsoType iso_type_small(const PermGroup& g)
{
    const std::size_t n = g.order();
    std::size_t involutions = 0;
    std::size_t exponent = 1;
    for (std::size_t x = 0; x < n; ++x) {
        auto o = g.element_order(x);
        if (o == n)
            return IsoType::cyclic(n);
        if (o == 2)
            ++involutions;
        exponent = std::lcm(exponent, o);
    }
    const bool abelian = g.is_abelian();
    if (abelian && is_prime(exponent) && n == exponent * exponent)
        return IsoType::elementary_abelian(exponent, 2);
    if (n == 8 && !abelian && involutions == 1)
        return IsoType::quaternion8();
    return IsoType::other(n);
}

inline IsoType iso_type_small(const QuotientGroup& q) { return iso_type_small(q.group()); }

/// A subgroup realized as a group in its own right, on the same points.
struct EmbeddedSubgroup {
    std::shared_ptr<const PermGroup> group;
    std::vector<PermGroup::Index> to_parent;
};

inline EmbeddedSubgroup subgroup_as_group(const PermGroup& parent, const Subgroup& s)
{
    std::vector<Perm> gens;
    for (auto x : s.generators)
        gens.push_back(parent.element(x));
    EmbeddedSubgroup out;
    out.group = std::make_shared<const PermGroup>(
        PermGroup::generate(parent.degree(), std::move(gens), GroupLimits{std::max<std::size_t>(s.order(), 1)}));
    for (const auto& e : out.group->elements())
        out.to_parent.push_back(*parent.index_of(e));
    return out;
}

} // namespace endotriv
