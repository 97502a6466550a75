#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace endotriv {

/// A permutation of {0..n-1} in one-line image notation: p[i] is the image of i.
using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::size_t degree)
{
    Perm p(degree);
    std::iota(p.begin(), p.end(), 0u);
    return p;
}

/// (a * b)(x) = a(b(x)); b acts first.
inline Perm compose(const Perm& a, const Perm& b)
{
    Perm r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = a[b[i]];
    return r;
}

inline Perm invert(const Perm& a)
{
    Perm r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[a[i]] = static_cast<std::uint32_t>(i);
    return r;
}

inline bool is_valid_perm(const Perm& p, std::size_t degree)
{
    if (p.size() != degree)
        return false;
    std::vector<bool> seen(degree, false);
    for (auto v : p) {
        if (v >= degree || seen[v])
            return false;
        seen[v] = true;
    }
    return true;
}

struct GroupLimits {
    std::size_t order_cap = 4000;
};

/// A finite permutation group with all elements enumerated.
///
/// Elements are sorted lexicographically by their image lists, so the
/// identity is always element 0. The full multiplication table is kept;
/// groups stay at desk scale (order cap, default 4000).
class PermGroup {
public:
    using Index = std::uint32_t;

    static PermGroup generate(std::size_t degree, std::vector<Perm> generators,
                              const GroupLimits& limits = {})
    {
        if (degree == 0)
            throw ValidationError("group degree must be positive");
        for (const auto& g : generators)
            if (!is_valid_perm(g, degree))
                throw ValidationError("generator is not a permutation of {0.." +
                                      std::to_string(degree - 1) + "}");

        std::map<Perm, std::size_t> seen;
        std::vector<Perm> elems{identity_perm(degree)};
        seen.emplace(elems.front(), 0);
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (const auto& g : generators) {
                Perm next = compose(g, elems[i]);
                if (seen.emplace(next, elems.size()).second) {
                    elems.push_back(std::move(next));
                    if (elems.size() > limits.order_cap)
                        throw BudgetExceeded("group order exceeds cap " +
                                             std::to_string(limits.order_cap));
                }
            }
        }
        std::sort(elems.begin(), elems.end());

        PermGroup g;
        g.degree_ = degree;
        g.generators_ = std::move(generators);
        g.elements_ = std::move(elems);
        g.build_tables();
        return g;
    }

    std::size_t degree() const { return degree_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<Perm>& generators() const { return generators_; }
    const std::vector<Perm>& elements() const { return elements_; }
    const Perm& element(std::size_t i) const { return elements_[i]; }
    static constexpr Index identity() { return 0; }

    /// Index of elements[a] * elements[b].
    Index mul(std::size_t a, std::size_t b) const { return table_[a * order() + b]; }
    Index inv(std::size_t a) const { return inverse_[a]; }
    /// g h g^-1
    Index conj(std::size_t g, std::size_t h) const { return mul(mul(g, h), inv(g)); }

    std::optional<Index> index_of(const Perm& p) const
    {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
        if (it == elements_.end() || *it != p)
            return std::nullopt;
        return static_cast<Index>(it - elements_.begin());
    }

    Index generator_index(std::size_t k) const { return *index_of(generators_[k]); }

    std::size_t element_order(std::size_t a) const
    {
        std::size_t n = 1;
        for (Index x = static_cast<Index>(a); x != identity(); x = mul(x, a))
            ++n;
        return n;
    }

    bool is_abelian() const
    {
        for (std::size_t a = 0; a < order(); ++a)
            for (std::size_t b = a + 1; b < order(); ++b)
                if (mul(a, b) != mul(b, a))
                    return false;
        return true;
    }

    std::uint32_t apply(std::size_t g, std::uint32_t point) const { return elements_[g][point]; }

private:
    void build_tables()
    {
        const std::size_t n = order();
        table_.assign(n * n, 0);
        inverse_.assign(n, 0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b)
                table_[a * n + b] = *index_of(compose(elements_[a], elements_[b]));
            inverse_[a] = *index_of(invert(elements_[a]));
        }
    }

    std::size_t degree_ = 0;
    std::vector<Perm> generators_;
    std::vector<Perm> elements_;
    std::vector<Index> table_;
    std::vector<Index> inverse_;
};

inline PermGroup enumerate_group(std::size_t degree, std::vector<Perm> generators,
                                 const GroupLimits& limits = {})
{
    return PermGroup::generate(degree, std::move(generators), limits);
}

/// Group file: first non-comment line is the degree, each further non-empty
/// line one generator in image notation. Lines starting with '#' are ignored.
inline PermGroup parse_group(std::istream& in, const GroupLimits& limits = {})
{
    std::string line;
    std::optional<std::size_t> degree;
    std::vector<Perm> gens;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ls(line);
        if (!degree) {
            long long d = 0;
            if (!(ls >> d) || d <= 0)
                throw ValidationError("line " + std::to_string(lineno) + ": expected a positive degree");
            std::string rest;
            if (ls >> rest)
                throw ValidationError("line " + std::to_string(lineno) + ": trailing tokens after degree");
            degree = static_cast<std::size_t>(d);
            continue;
        }
        Perm p;
        long long v = 0;
        while (ls >> v) {
            if (v < 0)
                throw ValidationError("line " + std::to_string(lineno) + ": negative image");
            p.push_back(static_cast<std::uint32_t>(v));
        }
        if (!ls.eof())
            throw ValidationError("line " + std::to_string(lineno) + ": non-integer token");
        if (!is_valid_perm(p, *degree))
            throw ValidationError("line " + std::to_string(lineno) + ": not a permutation of degree " +
                                  std::to_string(*degree));
        gens.push_back(std::move(p));
    }
    if (!degree)
        throw ValidationError("group file has no degree line");
    return enumerate_group(*degree, std::move(gens), limits);
}

inline PermGroup read_group_file(const std::string& path, const GroupLimits& limits = {})
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open group file '" + path + "'");
    return parse_group(in, limits);
}

namespace builtin {

inline Perm cycle_perm(std::size_t n, std::size_t offset, std::size_t degree)
{
    Perm p = identity_perm(degree);
    for (std::size_t i = 0; i < n; ++i)
        p[offset + i] = static_cast<std::uint32_t>(offset + (i + 1) % n);
    return p;
}

inline PermGroup cyclic(std::size_t n)
{
    if (n == 0)
        throw ValidationError("cyclic:n needs n >= 1");
    return enumerate_group(n, {cycle_perm(n, 0, n)});
}

/// Dihedral group of order 2n acting on the n vertices of a polygon (n >= 3).
inline PermGroup dihedral(std::size_t order)
{
    if (order % 2 != 0 || order < 6)
        throw ValidationError("dihedral:2n needs an even order >= 6");
    const std::size_t n = order / 2;
    Perm reflect(n);
    for (std::size_t i = 0; i < n; ++i)
        reflect[i] = static_cast<std::uint32_t>((n - i) % n);
    return enumerate_group(n, {cycle_perm(n, 0, n), reflect});
}

/// Q8 in its regular representation; points 0..7 are 1, i, j, k, -1, -i, -j, -k.
inline PermGroup quaternion8()
{
    return enumerate_group(8, {{1, 4, 3, 6, 5, 0, 7, 2}, {2, 7, 4, 1, 6, 3, 0, 5}});
}

/// (Z/p)^k as k disjoint p-cycles.
inline PermGroup elementary_abelian(std::size_t p, std::size_t k)
{
    if (p < 2 || k == 0)
        throw ValidationError("elemab:p,k needs p >= 2 and k >= 1");
    std::vector<Perm> gens;
    for (std::size_t i = 0; i < k; ++i)
        gens.push_back(cycle_perm(p, i * p, p * k));
    return enumerate_group(p * k, std::move(gens));
}

inline PermGroup klein_four() { return enumerate_group(4, {{1, 0, 3, 2}, {2, 3, 0, 1}}); }

inline PermGroup symmetric3() { return enumerate_group(3, {{1, 0, 2}, {1, 2, 0}}); }

/// AGL(1,5) = C5 x| C4 on the points of F_5: x -> x+1, x -> 2x.
inline PermGroup frobenius20() { return enumerate_group(5, {{1, 2, 3, 4, 0}, {0, 2, 4, 1, 3}}); }

/// Parses "cyclic:n", "dihedral:2n", "quaternion:8", "elemab:p,k", "klein", "s3", "frobenius:20".
inline PermGroup from_spec(const std::string& spec)
{
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&](const std::string& s) -> std::size_t {
        try {
            std::size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos != s.size() || v <= 0)
                throw ValidationError("");
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ValidationError("bad numeric argument in builtin group '" + spec + "'");
        }
    };
    if (name == "cyclic")
        return cyclic(number(arg));
    if (name == "dihedral")
        return dihedral(number(arg));
    if (name == "quaternion") {
        if (number(arg) != 8)
            throw ValidationError("only quaternion:8 is available");
        return quaternion8();
    }
    if (name == "elemab") {
        auto comma = arg.find(',');
        if (comma == std::string::npos)
            throw ValidationError("elemab needs p,k");
        return elementary_abelian(number(arg.substr(0, comma)), number(arg.substr(comma + 1)));
    }
    if (name == "klein" && arg.empty())
        return klein_four();
    if (name == "s3" && arg.empty())
        return symmetric3();
    if (name == "frobenius") {
        if (number(arg) != 20)
            throw ValidationError("only frobenius:20 is available");
        return frobenius20();
    }
    throw ValidationError("unknown builtin group '" + spec + "'");
}

} // namespace builtin

} // namespace endotriv
