#pragma once

#include "borel_smith.hpp"
#include "errors.hpp"
#include "int_matrix.hpp"
#include "subgroup_lattice.hpp"
#include "superclass.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace endotriv {

/// Virtual G-set: integer coefficients on [G/H] over all subgroup classes
/// (canonical class order).
struct BurnsideElement {
    IntVector coeffs;

    friend bool operator==(const BurnsideElement&, const BurnsideElement&) = default;
};

/// Mark vector: H -> |X^H| over all subgroup classes.
struct MarkVector {
    IntVector marks;

    friend bool operator==(const MarkVector&, const MarkVector&) = default;
    friend auto operator<=>(const MarkVector& a, const MarkVector& b) { return a.marks <=> b.marks; }
};

inline bool is_p_group(const PermGroup& g, std::uint64_t p) { return is_power_of(g.order(), p); }

/// The prime of a nontrivial p-group, or nullopt.
inline std::optional<std::uint64_t> p_group_prime(const PermGroup& g)
{
    auto q = prime_power_base(g.order());
    if (q == 0)
        return std::nullopt;
    return q;
}

/// M[K][H] = |(G/H)^K| = #{gH : g^-1 K g <= H}, counted over cosets.
inline IntMatrix table_of_marks(const SubgroupLattice& lat)
{
    const auto& g = lat.group();
    const std::size_t c = lat.class_count();
    IntMatrix m(c, c);
    for (std::size_t hc = 0; hc < c; ++hc) {
        const auto& h = lat.subgroup(lat.class_rep(hc));
        // Left coset representatives of H.
        std::vector<bool> seen(g.order(), false);
        std::vector<PermGroup::Index> reps;
        for (std::size_t x = 0; x < g.order(); ++x) {
            if (seen[x])
                continue;
            reps.push_back(static_cast<PermGroup::Index>(x));
            for (auto y : h.members)
                seen[g.mul(x, y)] = true;
        }
        for (std::size_t kc = 0; kc < c; ++kc) {
            const auto& k = lat.subgroup(lat.class_rep(kc));
            long long fixed = 0;
            for (auto x : reps) {
                const auto xi = g.inv(x);
                bool all = std::all_of(k.members.begin(), k.members.end(),
                                       [&](auto y) { return h.contains(g.conj(xi, y)); });
                if (all)
                    ++fixed;
            }
            m(kc, hc) = fixed;
        }
    }
    return m;
}

inline MarkVector marks_of(const IntMatrix& table, const BurnsideElement& x)
{
    return {table * x.coeffs};
}

/// Burnside element with the given marks, or nullopt if the pullback through
/// the table of marks is not integral.
///
/// The table is upper triangular in the canonical order, so this is exact
/// back substitution.
inline std::optional<BurnsideElement> pullback_marks(const IntMatrix& table, const MarkVector& m)
{
    const std::size_t n = table.rows();
    if (m.marks.size() != n)
        throw ValidationError("pullback_marks: length mismatch");
    IntVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Integer s = m.marks[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= table(i, k) * x[k];
        if (s % table(i, i) != 0)
            return std::nullopt;
        x[i] = s / table(i, i);
    }
    return BurnsideElement{x};
}

/// Product in B(G) through pointwise multiplication of marks.
inline BurnsideElement multiply(const IntMatrix& table, const BurnsideElement& a, const BurnsideElement& b)
{
    auto ma = marks_of(table, a), mb = marks_of(table, b);
    for (std::size_t i = 0; i < ma.marks.size(); ++i)
        ma.marks[i] *= mb.marks[i];
    auto out = pullback_marks(table, ma);
    if (!out)
        throw std::logic_error("multiply: product marks are not integral");
    return *out;
}

inline BurnsideElement burnside_identity(std::size_t classes)
{
    BurnsideElement e{IntVector(classes, 0)};
    e.coeffs.back() = 1; // [G/G]
    return e;
}

struct UnitLimits {
    std::size_t class_cap = 20;
};

/// B(G)^x by exhaustive search over {+1, -1}^c mark vectors.
inline std::vector<BurnsideElement> units(const IntMatrix& table, const UnitLimits& limits = {})
{
    const std::size_t c = table.rows();
    if (c > limits.class_cap)
        throw BudgetExceeded("units: " + std::to_string(c) + " subgroup classes exceed the enumeration cap");
    std::vector<BurnsideElement> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c); ++mask) {
        MarkVector m{IntVector(c)};
        for (std::size_t i = 0; i < c; ++i)
            m.marks[i] = (mask >> i) & 1u ? -1 : 1;
        if (auto x = pullback_marks(table, m))
            out.push_back(*x);
    }
    return out;
}

/// phi(f)(K) = (-1)^f(K).
inline MarkVector exponential(const SuperclassFn& f)
{
    MarkVector m{IntVector(f.size())};
    for (std::size_t i = 0; i < f.size(); ++i)
        m.marks[i] = (f[i] % 2 == 0) ? 1 : -1;
    return m;
}

namespace detail {

/// F_2 span of the columns of an integer basis, reduced mod 2.
inline std::vector<std::vector<std::uint8_t>> f2_span(const IntMatrix& basis)
{
    std::set<std::vector<std::uint8_t>> span{std::vector<std::uint8_t>(basis.rows(), 0)};
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        std::vector<std::uint8_t> v(basis.rows());
        for (std::size_t i = 0; i < basis.rows(); ++i)
            v[i] = static_cast<std::uint8_t>(floor_mod(basis(i, j), 2) == 1);
        std::vector<std::vector<std::uint8_t>> added;
        for (const auto& s : span) {
            auto w = s;
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] ^= v[i];
            added.push_back(std::move(w));
        }
        span.insert(added.begin(), added.end());
    }
    return {span.begin(), span.end()};
}

inline MarkVector sign_vector(const std::vector<std::uint8_t>& bits)
{
    MarkVector m{IntVector(bits.size())};
    for (std::size_t i = 0; i < bits.size(); ++i)
        m.marks[i] = bits[i] ? -1 : 1;
    return m;
}

inline void require_p_group_poset(const SubgroupLattice& lat, const PSubposet& poset)
{
    if (!is_p_group(lat.group(), poset.p))
        throw ValidationError("operation requires a p-group");
}

} // namespace detail

struct TornehaveReport {
    bool pass = false;
    std::vector<MarkVector> exponential_image; // sorted
    std::vector<MarkVector> unit_marks;        // sorted
};

/// phi(CF_b(G)) = m(B(G)^x) as sets of sign vectors. The exponential image
/// only depends on CF_b mod 2, i.e. the F_2 span of the reduced basis.
inline TornehaveReport tornehave_check(const SubgroupLattice& lat, const PSubposet& poset,
                                       const UnitLimits& limits = {})
{
    detail::require_p_group_poset(lat, poset);
    TornehaveReport rep;
    for (const auto& bits : detail::f2_span(cfb_lattice(lat, poset).basis()))
        rep.exponential_image.push_back(detail::sign_vector(bits));
    const auto table = table_of_marks(lat);
    for (const auto& u : units(table, limits))
        rep.unit_marks.push_back(marks_of(table, u));
    std::sort(rep.exponential_image.begin(), rep.exponential_image.end());
    std::sort(rep.unit_marks.begin(), rep.unit_marks.end());
    rep.pass = rep.exponential_image == rep.unit_marks;
    return rep;
}

/// Solve sum_j c_j basis_j = target (mod 2) for c in {0,1}^rank.
inline std::optional<std::vector<std::uint8_t>> solve_mod2(const IntMatrix& basis, const std::vector<std::uint8_t>& target)
{
    const std::size_t n = basis.rows(), k = basis.cols();
    std::vector<std::vector<std::uint8_t>> aug(n, std::vector<std::uint8_t>(k + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            aug[i][j] = static_cast<std::uint8_t>(floor_mod(basis(i, j), 2) == 1);
        aug[i][k] = target[i];
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k && row < n; ++c) {
        std::size_t r = row;
        while (r < n && !aug[r][c])
            ++r;
        if (r == n)
            continue;
        std::swap(aug[r], aug[row]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != row && aug[i][c])
                for (std::size_t j = c; j <= k; ++j)
                    aug[i][j] ^= aug[row][j];
        pivots.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (aug[i][k])
            return std::nullopt;
    std::vector<std::uint8_t> sol(k, 0);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        sol[pivots[i]] = aug[i][k];
    return sol;
}

} // namespace endotriv
