#pragma once

#include "burnside.hpp"
#include "errors.hpp"
#include "fp_matrix.hpp"
#include "perm_group.hpp"
#include "subgroup_lattice.hpp"
#include "superclass.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace endotriv {

/// Finite G-set with an explicit action table (element x point -> point).
/// Points are 0..size()-1 and serve as the permutation basis.
class BasedGSet {
public:
    BasedGSet() = default;

    BasedGSet(std::shared_ptr<const PermGroup> g, std::size_t n, std::vector<std::uint32_t> table)
        : group_(std::move(g)), n_(n), table_(std::move(table))
    {
        if (!group_)
            throw ValidationError("BasedGSet: missing group");
        if (table_.size() != group_->order() * n_)
            throw ValidationError("BasedGSet: action table has wrong size");
        for (auto x : table_)
            if (x >= n_)
                throw ValidationError("BasedGSet: action leaves the point set");
    }

    static BasedGSet empty(std::shared_ptr<const PermGroup> g) { return BasedGSet(std::move(g), 0, {}); }

    static BasedGSet point(std::shared_ptr<const PermGroup> g)
    {
        const auto order = g->order();
        return BasedGSet(std::move(g), 1, std::vector<std::uint32_t>(order, 0));
    }

    /// Left cosets xQ, numbered by their smallest element.
    static BasedGSet cosets(std::shared_ptr<const PermGroup> g, const Subgroup& q)
    {
        const auto& grp = *g;
        std::vector<std::uint32_t> coset_of(grp.order(), UINT32_MAX);
        std::vector<PermGroup::Index> reps;
        for (std::size_t x = 0; x < grp.order(); ++x) {
            if (coset_of[x] != UINT32_MAX)
                continue;
            for (auto y : q.members)
                coset_of[grp.mul(x, y)] = static_cast<std::uint32_t>(reps.size());
            reps.push_back(static_cast<PermGroup::Index>(x));
        }
        const std::size_t n = reps.size();
        std::vector<std::uint32_t> table(grp.order() * n);
        for (std::size_t e = 0; e < grp.order(); ++e)
            for (std::size_t c = 0; c < n; ++c)
                table[e * n + c] = coset_of[grp.mul(e, reps[c])];
        return BasedGSet(std::move(g), n, std::move(table));
    }

    /// Cartesian product with diagonal action; (x, y) has index x*|b| + y.
    static BasedGSet product(const BasedGSet& a, const BasedGSet& b)
    {
        if (a.group_.get() != b.group_.get())
            throw ValidationError("BasedGSet::product: different groups");
        const std::size_t n = a.n_ * b.n_;
        const std::size_t order = a.group_->order();
        std::vector<std::uint32_t> table(order * n);
        for (std::size_t e = 0; e < order; ++e)
            for (std::size_t x = 0; x < a.n_; ++x)
                for (std::size_t y = 0; y < b.n_; ++y)
                    table[e * n + x * b.n_ + y] = static_cast<std::uint32_t>(a.act(e, x) * b.n_ + b.act(e, y));
        return BasedGSet(a.group_, n, std::move(table));
    }

    const PermGroup& group() const { return *group_; }
    const std::shared_ptr<const PermGroup>& group_ptr() const { return group_; }
    std::size_t size() const { return n_; }

    std::uint32_t act(std::size_t element, std::size_t x) const { return table_[element * n_ + x]; }

    /// Points fixed by every element of s (its generators suffice).
    std::vector<std::uint32_t> fixed_points(const Subgroup& s) const
    {
        std::vector<std::uint32_t> out;
        for (std::uint32_t x = 0; x < n_; ++x)
            if (std::all_of(s.generators.begin(), s.generators.end(), [&](auto g) { return act(g, x) == x; }))
                out.push_back(x);
        return out;
    }

    std::vector<PermGroup::Index> stabilizer(std::size_t x) const
    {
        std::vector<PermGroup::Index> out;
        for (std::size_t e = 0; e < group_->order(); ++e)
            if (act(e, x) == x)
                out.push_back(static_cast<PermGroup::Index>(e));
        return out;
    }

    /// Orbits ordered by smallest point, points ascending.
    std::vector<std::vector<std::uint32_t>> orbits() const
    {
        std::vector<bool> seen(n_, false);
        std::vector<std::vector<std::uint32_t>> out;
        for (std::uint32_t x = 0; x < n_; ++x) {
            if (seen[x])
                continue;
            std::vector<std::uint32_t> orbit;
            for (std::size_t e = 0; e < group_->order(); ++e) {
                auto y = act(e, x);
                if (!seen[y]) {
                    seen[y] = true;
                    orbit.push_back(y);
                }
            }
            std::sort(orbit.begin(), orbit.end());
            out.push_back(std::move(orbit));
        }
        return out;
    }

    /// Image of generator k as a point permutation.
    std::vector<std::uint32_t> generator_image(std::size_t k) const
    {
        const auto e = group_->generator_index(k);
        return {table_.begin() + static_cast<std::ptrdiff_t>(e * n_),
                table_.begin() + static_cast<std::ptrdiff_t>((e + 1) * n_)};
    }

    /// A stable subset of points, acted on by another group through
    /// elem_map (new element -> element of this group).
    BasedGSet transport(std::shared_ptr<const PermGroup> g, const std::vector<PermGroup::Index>& elem_map,
                        const std::vector<std::uint32_t>& points) const
    {
        std::vector<std::uint32_t> pos(n_, UINT32_MAX);
        for (std::size_t i = 0; i < points.size(); ++i)
            pos[points[i]] = static_cast<std::uint32_t>(i);
        const std::size_t m = points.size();
        std::vector<std::uint32_t> table(g->order() * m);
        for (std::size_t e = 0; e < g->order(); ++e)
            for (std::size_t i = 0; i < m; ++i) {
                auto y = pos[act(elem_map[e], points[i])];
                if (y == UINT32_MAX)
                    throw ValidationError("BasedGSet::transport: point subset is not stable");
                table[e * m + i] = y;
            }
        return BasedGSet(std::move(g), m, std::move(table));
    }

    BasedGSet subset(const std::vector<std::uint32_t>& points) const
    {
        std::vector<PermGroup::Index> id(group_->order());
        std::iota(id.begin(), id.end(), PermGroup::Index{0});
        return transport(group_, id, points);
    }

    /// Identity acts trivially, and (s g).x = s.(g.x) for generators s.
    void verify() const
    {
        for (std::uint32_t x = 0; x < n_; ++x)
            if (act(PermGroup::identity(), x) != x)
                throw std::logic_error("BasedGSet: identity moves a point");
        const auto& g = *group_;
        for (std::size_t k = 0; k < g.generators().size(); ++k) {
            const auto s = g.generator_index(k);
            for (std::size_t e = 0; e < g.order(); ++e)
                for (std::uint32_t x = 0; x < n_; ++x)
                    if (act(g.mul(s, e), x) != act(s, act(e, x)))
                        throw std::logic_error("BasedGSet: action is not compatible with multiplication");
        }
    }

    friend bool operator==(const BasedGSet& a, const BasedGSet& b)
    {
        return a.n_ == b.n_ && a.table_ == b.table_;
    }

private:
    std::shared_ptr<const PermGroup> group_;
    std::size_t n_ = 0;
    std::vector<std::uint32_t> table_;
};

/// Bounded complex of permutation modules over F_p; d_i goes from term i to
/// term i-1 (homological grading).
class PermComplex {
public:
    PermComplex(std::shared_ptr<const PermGroup> g, std::uint64_t p) : group_(std::move(g)), p_(p)
    {
        if (!is_prime(p))
            throw ValidationError("p = " + std::to_string(p) + " is not prime");
        empty_ = BasedGSet::empty(group_);
    }

    std::uint64_t prime() const { return p_; }
    const PermGroup& group() const { return *group_; }
    const std::shared_ptr<const PermGroup>& group_ptr() const { return group_; }

    void set_term(int degree, BasedGSet s)
    {
        if (s.group_ptr().get() != group_.get())
            throw ValidationError("PermComplex: term over a different group");
        if (s.size() == 0)
            terms_.erase(degree);
        else
            terms_[degree] = std::move(s);
    }

    void set_differential(int degree, FpMatrix d)
    {
        if (d.prime() != p_ || d.rows() != dim(degree - 1) || d.cols() != dim(degree))
            throw ValidationError("PermComplex: differential d_" + std::to_string(degree) + " has wrong shape");
        if (d.rows() == 0 || d.cols() == 0)
            d_.erase(degree);
        else
            d_[degree] = std::move(d);
    }

    const BasedGSet& term(int degree) const
    {
        auto it = terms_.find(degree);
        return it == terms_.end() ? empty_ : it->second;
    }

    std::size_t dim(int degree) const { return term(degree).size(); }

    FpMatrix differential(int degree) const
    {
        auto it = d_.find(degree);
        if (it != d_.end())
            return it->second;
        return FpMatrix(p_, dim(degree - 1), dim(degree));
    }

    /// Differential if stored (both neighbouring terms nonzero), else null.
    const FpMatrix* differential_ptr(int degree) const
    {
        auto it = d_.find(degree);
        return it == d_.end() ? nullptr : &it->second;
    }

    /// Degrees carrying a nonzero term, ascending.
    std::vector<int> degrees() const
    {
        std::vector<int> out;
        for (const auto& [deg, s] : terms_)
            out.push_back(deg);
        return out;
    }

    std::map<int, std::size_t> term_dims() const
    {
        std::map<int, std::size_t> out;
        for (const auto& [deg, s] : terms_)
            out[deg] = s.size();
        return out;
    }

    std::size_t total_dim() const
    {
        std::size_t t = 0;
        for (const auto& [deg, s] : terms_)
            t += s.size();
        return t;
    }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (const auto& [deg, s] : terms_)
            chi += (deg % 2 == 0 ? 1 : -1) * static_cast<long long>(s.size());
        return chi;
    }

    /// Actions are actions, d^2 = 0, and every d commutes with every generator.
    void verify() const
    {
        for (const auto& [deg, s] : terms_)
            s.verify();
        for (const auto& [deg, d] : d_) {
            if (auto next = d_.find(deg - 1); next != d_.end())
                if (!(next->second * d).is_zero())
                    throw std::logic_error("PermComplex: d_" + std::to_string(deg - 1) + " d_" +
                                           std::to_string(deg) + " != 0");
            const auto& src = term(deg);
            const auto& dst = term(deg - 1);
            for (std::size_t k = 0; k < group_->generators().size(); ++k) {
                const auto s = group_->generator_index(k);
                for (std::size_t x = 0; x < d.cols(); ++x)
                    for (std::size_t y = 0; y < d.rows(); ++y)
                        if (d(dst.act(s, y), src.act(s, x)) != d(y, x))
                            throw std::logic_error("PermComplex: d_" + std::to_string(deg) + " is not equivariant");
            }
        }
    }

    friend bool operator==(const PermComplex& a, const PermComplex& b)
    {
        return a.p_ == b.p_ && a.terms_ == b.terms_ && a.d_ == b.d_;
    }

private:
    std::shared_ptr<const PermGroup> group_;
    std::uint64_t p_;
    std::map<int, BasedGSet> terms_;
    std::map<int, FpMatrix> d_;
    BasedGSet empty_;
};

/// k concentrated in one degree.
inline PermComplex unit_complex(std::shared_ptr<const PermGroup> g, std::uint64_t p, int degree = 0)
{
    PermComplex c(g, p);
    c.set_term(degree, BasedGSet::point(g));
    return c;
}

inline std::size_t p_part(std::size_t n, std::uint64_t p)
{
    std::size_t out = 1;
    while (n % p == 0) {
        n /= p;
        out *= p;
    }
    return out;
}

/// 0 -> k[G/Q] -> k -> 0 (augmentation, k in degree 0); k[1] when Q is Sylow.
inline PermComplex build_CQ(const SubgroupLattice& lat, std::uint64_t p, std::size_t q)
{
    if (!lat.is_p_subgroup(q, p))
        throw ValidationError("build_CQ: Q is not a p-subgroup");
    const auto& g = lat.group_ptr();
    const auto& sub = lat.subgroup(q);
    if (sub.order() == p_part(g->order(), p))
        return unit_complex(g, p, 1);
    PermComplex c(g, p);
    c.set_term(1, BasedGSet::cosets(g, sub));
    c.set_term(0, BasedGSet::point(g));
    FpMatrix d(p, 1, c.dim(1));
    for (std::size_t j = 0; j < d.cols(); ++j)
        d(0, j) = 1;
    c.set_differential(1, std::move(d));
    return c;
}

/// Koszul tensor product: blocks ordered by left degree, left factor major,
/// d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.
inline PermComplex tensor(const PermComplex& a, const PermComplex& b)
{
    if (a.group_ptr().get() != b.group_ptr().get() || a.prime() != b.prime())
        throw ValidationError("tensor: complexes over different groups or primes");
    const auto p = a.prime();
    PermComplex out(a.group_ptr(), p);
    const auto da = a.degrees(), db = b.degrees();
    if (da.empty() || db.empty())
        return out;

    // offset of block (i, j) inside degree i + j
    std::map<std::pair<int, int>, std::size_t> offset;
    for (int n = da.front() + db.front(); n <= da.back() + db.back(); ++n) {
        std::vector<BasedGSet> blocks;
        std::size_t off = 0;
        std::vector<std::uint32_t> table;
        for (int i : da) {
            const int j = n - i;
            if (b.dim(j) == 0)
                continue;
            offset[{i, j}] = off;
            blocks.push_back(BasedGSet::product(a.term(i), b.term(j)));
            off += blocks.back().size();
        }
        if (off == 0)
            continue;
        const auto order = a.group().order();
        table.resize(order * off);
        std::size_t base = 0;
        for (const auto& blk : blocks) {
            for (std::size_t e = 0; e < order; ++e)
                for (std::size_t x = 0; x < blk.size(); ++x)
                    table[e * off + base + x] = static_cast<std::uint32_t>(base + blk.act(e, x));
            base += blk.size();
        }
        out.set_term(n, BasedGSet(a.group_ptr(), off, std::move(table)));
    }

    // sparse column view of a differential
    auto columns = [](const FpMatrix* d) {
        std::vector<std::vector<std::pair<std::size_t, FpMatrix::Elem>>> cols;
        if (!d)
            return cols;
        cols.resize(d->cols());
        for (std::size_t r = 0; r < d->rows(); ++r)
            for (std::size_t c = 0; c < d->cols(); ++c)
                if ((*d)(r, c))
                    cols[c].emplace_back(r, (*d)(r, c));
        return cols;
    };
    std::map<int, std::vector<std::vector<std::pair<std::size_t, FpMatrix::Elem>>>> ca, cb;
    for (int i : da)
        ca[i] = columns(a.differential_ptr(i));
    for (int j : db)
        cb[j] = columns(b.differential_ptr(j));

    for (int n : out.degrees()) {
        if (out.dim(n - 1) == 0)
            continue;
        FpMatrix d(p, out.dim(n - 1), out.dim(n));
        for (const auto& [ij, off] : offset) {
            const auto [i, j] = ij;
            if (i + j != n)
                continue;
            const std::size_t nb = b.dim(j);
            const auto& cai = ca[i];
            const auto& cbj = cb[j];
            auto left = offset.find({i - 1, j});
            auto right = offset.find({i, j - 1});
            const FpMatrix::Elem sign = (i % 2 == 0) ? 1 : static_cast<FpMatrix::Elem>(p - 1);
            for (std::size_t x = 0; x < a.dim(i); ++x)
                for (std::size_t y = 0; y < nb; ++y) {
                    const std::size_t col = off + x * nb + y;
                    if (left != offset.end() && !cai.empty())
                        for (auto [x2, v] : cai[x])
                            d(left->second + x2 * nb + y, col) = d.add(d(left->second + x2 * nb + y, col), v);
                    if (right != offset.end() && !cbj.empty()) {
                        const std::size_t nb2 = b.dim(j - 1);
                        for (auto [y2, v] : cbj[y])
                            d(right->second + x * nb2 + y2, col) =
                                d.add(d(right->second + x * nb2 + y2, col), d.mul(sign, v));
                    }
                }
        }
        out.set_differential(n, std::move(d));
    }
    return out;
}

/// C*: term at -i is term i; d*_{n} = (-1)^n d_{1-n}^T.
inline PermComplex dual(const PermComplex& c)
{
    PermComplex out(c.group_ptr(), c.prime());
    for (int i : c.degrees())
        out.set_term(-i, c.term(i));
    for (int i : c.degrees())
        if (auto d = c.differential_ptr(i)) {
            const int n = 1 - i;
            out.set_differential(n, d->transpose().scaled(n % 2 == 0 ? 1 : -1));
        }
    return out;
}

namespace detail {

/// Complex on stable point subsets, transported to another group.
inline PermComplex transport_complex(const PermComplex& c, std::shared_ptr<const PermGroup> g,
                                     const std::vector<PermGroup::Index>& elem_map,
                                     const std::map<int, std::vector<std::uint32_t>>& points)
{
    PermComplex out(g, c.prime());
    auto pts = [&](int deg) -> const std::vector<std::uint32_t>& {
        static const std::vector<std::uint32_t> none;
        auto it = points.find(deg);
        return it == points.end() ? none : it->second;
    };
    for (int deg : c.degrees())
        out.set_term(deg, c.term(deg).transport(g, elem_map, pts(deg)));
    for (int deg : c.degrees())
        if (auto d = c.differential_ptr(deg)) {
            std::vector<std::size_t> rows(pts(deg - 1).begin(), pts(deg - 1).end());
            std::vector<std::size_t> cols(pts(deg).begin(), pts(deg).end());
            out.set_differential(deg, d->submatrix(rows, cols));
        }
    return out;
}

inline std::map<int, std::vector<std::uint32_t>> fixed_points(const PermComplex& c, const Subgroup& s)
{
    std::map<int, std::vector<std::uint32_t>> out;
    for (int deg : c.degrees())
        out[deg] = c.term(deg).fixed_points(s);
    return out;
}

inline void require_lattice_of(const SubgroupLattice& lat, const PermComplex& c)
{
    if (lat.group_ptr().get() != c.group_ptr().get() && lat.group().elements() != c.group().elements())
        throw ValidationError("lattice and complex are over different groups");
}

} // namespace detail

struct BrauerComplex {
    std::shared_ptr<const QuotientGroup> quotient; // N_G(P)/P
    PermComplex complex;
};

/// C(P): P-fixed basis points with the induced N_G(P)/P action, differentials
/// restricted to them.
inline BrauerComplex brauer(const PermComplex& c, const SubgroupLattice& lat, std::size_t p_subgroup)
{
    detail::require_lattice_of(lat, c);
    if (!lat.is_p_subgroup(p_subgroup, c.prime()))
        throw ValidationError("brauer: subgroup is not a p-subgroup");
    auto q = std::make_shared<const QuotientGroup>(lat, lat.normalizer(p_subgroup), p_subgroup);
    std::vector<PermGroup::Index> lifts(q->order());
    for (std::size_t e = 0; e < q->order(); ++e)
        lifts[e] = q->lift(e);
    auto cx = detail::transport_complex(c, q->group_ptr(), lifts,
                                        detail::fixed_points(c, lat.subgroup(p_subgroup)));
    cx.verify();
    return {std::move(q), std::move(cx)};
}

/// Restriction along a subgroup embedding.
inline PermComplex restrict_complex(const PermComplex& c, const EmbeddedSubgroup& h)
{
    std::map<int, std::vector<std::uint32_t>> all;
    for (int deg : c.degrees()) {
        all[deg].resize(c.dim(deg));
        std::iota(all[deg].begin(), all[deg].end(), 0u);
    }
    auto out = detail::transport_complex(c, h.group, h.to_parent, all);
    out.verify();
    return out;
}

/// dim H_i over all degrees with nonzero homology, for the subcomplex of
/// s-fixed points.
inline std::vector<std::pair<int, std::size_t>> fixed_point_homology(const PermComplex& c, const Subgroup& s)
{
    const auto pts = detail::fixed_points(c, s);
    auto sub = [&](int deg) -> std::optional<FpMatrix> {
        auto d = c.differential_ptr(deg);
        if (!d)
            return std::nullopt;
        const auto& r = pts.at(deg - 1);
        const auto& cl = pts.at(deg);
        return d->submatrix({r.begin(), r.end()}, {cl.begin(), cl.end()});
    };
    std::map<int, std::size_t> rank;
    for (int deg : c.degrees())
        if (auto m = sub(deg))
            rank[deg] = fp_rank(*m);
    auto rank_of = [&](int deg) { auto it = rank.find(deg); return it == rank.end() ? std::size_t{0} : it->second; };
    std::vector<std::pair<int, std::size_t>> out;
    for (int deg : c.degrees()) {
        const std::size_t h = pts.at(deg).size() - rank_of(deg) - rank_of(deg + 1);
        if (h)
            out.emplace_back(deg, h);
    }
    return out;
}

struct ClassHomology {
    std::size_t lattice_class = 0;
    bool sylow = false;
    std::vector<std::pair<int, std::size_t>> homology; // (degree, dim), nonzero only
    bool concentrated = false;
    std::optional<int> h_mark;
    std::size_t h_dim = 0; // dimension at the h-mark
};

struct HMarkReport {
    std::uint64_t p = 0;
    std::vector<ClassHomology> classes; // p-subposet order

    bool all_concentrated() const
    {
        return std::all_of(classes.begin(), classes.end(), [](const auto& c) { return c.concentrated; });
    }

    SuperclassFn function() const
    {
        SuperclassFn f;
        f.p = p;
        for (const auto& c : classes) {
            if (!c.h_mark)
                throw ValidationError("h-marks undefined: homology not concentrated at class " +
                                      std::to_string(c.lattice_class));
            f.values.push_back(*c.h_mark);
        }
        return f;
    }
};

inline HMarkReport h_marks(const PermComplex& c, const SubgroupLattice& lat, const PSubposet& poset)
{
    detail::require_lattice_of(lat, c);
    if (poset.p != c.prime())
        throw ValidationError("h_marks: poset prime differs from complex prime");
    HMarkReport rep;
    rep.p = poset.p;
    const auto sylow_order = p_part(lat.group().order(), poset.p);
    for (auto cls : poset.classes) {
        ClassHomology ch;
        ch.lattice_class = cls;
        const auto& s = lat.subgroup(lat.class_rep(cls));
        ch.sylow = s.order() == sylow_order;
        ch.homology = fixed_point_homology(c, s);
        ch.concentrated = ch.homology.size() == 1;
        if (ch.concentrated) {
            ch.h_mark = ch.homology.front().first;
            ch.h_dim = ch.homology.front().second;
        }
        rep.classes.push_back(std::move(ch));
    }
    return rep;
}

/// Concentrated, one-dimensional homology at every p-subgroup.
inline bool verify_endotrivial(const HMarkReport& r)
{
    return std::all_of(r.classes.begin(), r.classes.end(),
                       [](const auto& c) { return c.concentrated && c.h_dim == 1; });
}

/// Concentrated everywhere, one-dimensional at Sylow subgroups.
inline bool verify_endosplit_trivial_VFG(const HMarkReport& r)
{
    return std::all_of(r.classes.begin(), r.classes.end(),
                       [](const auto& c) { return c.concentrated && (!c.sylow || c.h_dim == 1); });
}

/// Removes contractible summands kA --phi--> kB where A, B are orbits in
/// adjacent degrees and the block of d between them is invertible
/// (equivariant Gaussian elimination). The result is homotopy equivalent to
/// the input, so Brauer homology and h-marks are unchanged.
inline PermComplex reduce_complex(const PermComplex& c)
{
    const auto degs = c.degrees();
    if (degs.empty())
        return c;
    struct Level {
        std::vector<std::vector<std::uint32_t>> orbits;
        std::vector<std::uint32_t> orbit_of;
        std::vector<bool> orbit_alive;
        std::vector<bool> alive;
    };
    std::map<int, Level> lv;
    for (int deg : degs) {
        Level l;
        l.orbits = c.term(deg).orbits();
        l.orbit_of.resize(c.dim(deg));
        for (std::size_t o = 0; o < l.orbits.size(); ++o)
            for (auto x : l.orbits[o])
                l.orbit_of[x] = static_cast<std::uint32_t>(o);
        l.orbit_alive.assign(l.orbits.size(), true);
        l.alive.assign(c.dim(deg), true);
        lv[deg] = std::move(l);
    }
    std::map<int, FpMatrix> d;
    for (int deg : degs)
        if (auto m = c.differential_ptr(deg))
            d[deg] = *m;

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [deg, m] : d) {
            auto& src = lv[deg];
            auto& dst = lv[deg - 1];
            for (std::size_t a = 0; a < src.orbits.size(); ++a) {
                if (!src.orbit_alive[a])
                    continue;
                const auto& A = src.orbits[a];
                std::vector<std::uint32_t> candidates;
                for (auto x : A)
                    for (std::size_t r = 0; r < m.rows(); ++r)
                        if (m(r, x) && dst.alive[r]) {
                            auto o = dst.orbit_of[r];
                            if (dst.orbits[o].size() == A.size())
                                candidates.push_back(o);
                        }
                std::sort(candidates.begin(), candidates.end());
                candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
                for (auto b : candidates) {
                    const auto& B = dst.orbits[b];
                    auto phi_inv = fp_inverse(m.submatrix({B.begin(), B.end()}, {A.begin(), A.end()}));
                    if (!phi_inv)
                        continue;
                    src.orbit_alive[a] = false;
                    dst.orbit_alive[b] = false;
                    for (auto x : A)
                        src.alive[x] = false;
                    for (auto y : B)
                        dst.alive[y] = false;
                    // d' = delta - gamma phi^-1 beta on the surviving points
                    std::vector<std::size_t> rows, cols;
                    for (std::size_t r = 0; r < m.rows(); ++r)
                        if (dst.alive[r] && std::any_of(A.begin(), A.end(), [&](auto x) { return m(r, x) != 0; }))
                            rows.push_back(r);
                    for (std::size_t col = 0; col < m.cols(); ++col)
                        if (src.alive[col] && std::any_of(B.begin(), B.end(), [&](auto y) { return m(y, col) != 0; }))
                            cols.push_back(col);
                    if (!rows.empty() && !cols.empty()) {
                        const auto gamma = m.submatrix(rows, {A.begin(), A.end()});
                        const auto beta = m.submatrix({B.begin(), B.end()}, cols);
                        const auto corr = gamma * (*phi_inv) * beta;
                        for (std::size_t i = 0; i < rows.size(); ++i)
                            for (std::size_t j = 0; j < cols.size(); ++j)
                                m(rows[i], cols[j]) = m.sub(m(rows[i], cols[j]), corr(i, j));
                    }
                    changed = true;
                    break;
                }
            }
        }
    }

    PermComplex out(c.group_ptr(), c.prime());
    std::map<int, std::vector<std::uint32_t>> keep;
    for (int deg : degs) {
        auto& k = keep[deg];
        for (std::uint32_t x = 0; x < c.dim(deg); ++x)
            if (lv[deg].alive[x])
                k.push_back(x);
        out.set_term(deg, c.term(deg).subset(k));
    }
    for (const auto& [deg, m] : d) {
        const auto& r = keep[deg - 1];
        const auto& cl = keep[deg];
        out.set_differential(deg, m.submatrix({r.begin(), r.end()}, {cl.begin(), cl.end()}));
    }
    return out;
}

struct BuildOptions {
    std::size_t budget = 20000; // max total dimension of any unreduced tensor step
    bool reduce = true;
    std::vector<std::size_t> factor_order; // positions in the p-subposet; empty = largest Q first
};

/// Tensor product of C_Q^{b_Q} (duals for negative exponents) over the
/// p-subposet, in the given factor order.
inline PermComplex build_from_coeffs(const SubgroupLattice& lat, const PSubposet& poset, const IntVector& b,
                                     const BuildOptions& opts = {})
{
    if (b.size() != poset.size())
        throw ValidationError("build: coefficient vector length does not match the p-subposet");
    std::vector<std::size_t> order = opts.factor_order;
    if (order.empty()) {
        // C_Q has |G:Q|+1 points for |G:Q|-1 dimensions of homology; factors
        // with a poor ratio go first so the last (largest) steps stay cheap
        order.resize(poset.size());
        std::iota(order.rbegin(), order.rend(), std::size_t{0});
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> ident(poset.size());
        std::iota(ident.begin(), ident.end(), std::size_t{0});
        if (sorted != ident)
            throw ValidationError("build: factor order is not a permutation");
    }
    auto current = unit_complex(lat.group_ptr(), poset.p);
    for (auto pos : order) {
        const long long e = to_int64(b[pos]);
        if (e == 0)
            continue;
        auto factor = build_CQ(lat, poset.p, lat.class_rep(poset.classes[pos]));
        if (e < 0)
            factor = dual(factor);
        for (long long k = 0; k < (e < 0 ? -e : e); ++k) {
            const std::size_t predicted = current.total_dim() * factor.total_dim();
            if (predicted > opts.budget)
                throw BudgetExceeded("tensor step would reach total dimension " + std::to_string(predicted) +
                                     " (budget " + std::to_string(opts.budget) + ")");
            current = tensor(current, factor);
            if (opts.reduce)
                current = reduce_complex(current);
        }
    }
    current.verify();
    return current;
}

/// Complex with h-marks f: exponents b = W^-1 f.
inline PermComplex build_from_hmarks(const SubgroupLattice& lat, const PSubposet& poset, const SuperclassFn& f,
                                     const BuildOptions& opts = {})
{
    if (f.p != poset.p || f.size() != poset.size())
        throw ValidationError("build_from_hmarks: function does not match the p-subposet");
    OmegaMatrix w(poset);
    auto c = build_from_coeffs(lat, poset, mobius_inversion(w, f), opts);
    auto rep = h_marks(c, lat, poset);
    if (!rep.all_concentrated() || rep.function() != f)
        throw std::logic_error("build_from_hmarks: h-marks of the constructed complex differ from the input");
    return c;
}

/// F_p[G]-module given by the action matrices of the group generators.
struct FpModule {
    std::shared_ptr<const PermGroup> group;
    std::uint64_t p = 2;
    std::size_t dim = 0;
    std::vector<FpMatrix> generator_action;
};

inline FpModule permutation_module(const BasedGSet& s, std::uint64_t p)
{
    FpModule m{s.group_ptr(), p, s.size(), {}};
    for (std::size_t k = 0; k < s.group().generators().size(); ++k) {
        FpMatrix a(p, s.size(), s.size());
        auto img = s.generator_image(k);
        for (std::size_t x = 0; x < s.size(); ++x)
            a(img[x], x) = 1;
        m.generator_action.push_back(std::move(a));
    }
    return m;
}

/// H_i(C) with the group action lifted to ker d_i / im d_{i+1}.
inline FpModule homology_module(const PermComplex& c, int degree)
{
    const auto p = c.prime();
    const auto kernel = fp_kernel_basis(c.differential(degree));
    const auto d_in = c.differential(degree + 1);
    const auto e_in = fp_rref(d_in);
    const std::size_t n = c.dim(degree);
    const std::size_t ni = e_in.rank();

    FpMatrix aug(p, n, ni + kernel.cols());
    for (std::size_t j = 0; j < ni; ++j)
        for (std::size_t r = 0; r < n; ++r)
            aug(r, j) = d_in(r, e_in.pivot_cols[j]);
    for (std::size_t j = 0; j < kernel.cols(); ++j)
        for (std::size_t r = 0; r < n; ++r)
            aug(r, ni + j) = kernel(r, j);
    const auto pivots = fp_rref(aug).pivot_cols;
    std::vector<std::size_t> basis_cols(pivots.begin(), pivots.end());
    const std::size_t h = basis_cols.size() - ni;
    const auto basis = aug.submatrix([&] {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }(), basis_cols);

    FpModule m{c.group_ptr(), p, h, {}};
    const auto& term = c.term(degree);
    for (std::size_t k = 0; k < c.group().generators().size(); ++k) {
        auto img = term.generator_image(k);
        FpMatrix moved(p, n, h);
        for (std::size_t j = 0; j < h; ++j)
            for (std::size_t x = 0; x < n; ++x)
                moved(img[x], j) = basis(x, ni + j);
        const auto coords = fp_solve_in_basis(basis, moved);
        FpMatrix a(p, h, h);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j)
                a(i, j) = coords(ni + i, j);
        m.generator_action.push_back(std::move(a));
    }
    return m;
}

struct FreeSummandCount {
    std::size_t free_rank = 0;
    std::size_t projective_free_dim = 0;
};

/// Over a p-group, the number of free summands is the rank of the norm
/// element; the remaining dimension belongs to the projective-free part.
inline FreeSummandCount free_summand_count(const FpModule& m)
{
    const auto& g = *m.group;
    if (!is_p_group(g, m.p))
        throw ValidationError("free_summand_count: group is not a p-group");
    if (m.generator_action.size() != g.generators().size())
        throw ValidationError("free_summand_count: one action matrix per generator expected");
    std::vector<std::optional<FpMatrix>> rho(g.order());
    rho[PermGroup::identity()] = FpMatrix::identity(m.p, m.dim);
    std::vector<std::size_t> queue{PermGroup::identity()};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const auto e = queue[i];
        for (std::size_t k = 0; k < g.generators().size(); ++k) {
            const auto x = g.mul(g.generator_index(k), e);
            auto r = m.generator_action[k] * (*rho[e]);
            if (!rho[x]) {
                rho[x] = std::move(r);
                queue.push_back(x);
            } else if (*rho[x] != r) {
                throw ValidationError("free_summand_count: matrices do not define a representation");
            }
        }
    }
    FpMatrix norm(m.p, m.dim, m.dim);
    for (const auto& r : rho) {
        if (!r)
            throw ValidationError("free_summand_count: generator matrices do not reach every element");
        norm = norm + *r;
    }
    FreeSummandCount out;
    out.free_rank = fp_rank(norm);
    out.projective_free_dim = m.dim - out.free_rank * g.order();
    return out;
}

/// Lambda(C) = sum_i (-1)^i [C_i] in B(G), via orbit stabilizers.
inline BurnsideElement lefschetz(const PermComplex& c, const SubgroupLattice& lat)
{
    detail::require_lattice_of(lat, c);
    if (!is_p_group(lat.group(), c.prime()))
        throw ValidationError("lefschetz: group is not a p-group");
    BurnsideElement out{IntVector(lat.class_count(), 0)};
    for (int deg : c.degrees()) {
        const auto& s = c.term(deg);
        for (const auto& orbit : s.orbits()) {
            auto stab = lat.find_members(s.stabilizer(orbit.front()));
            if (!stab)
                throw std::logic_error("lefschetz: stabilizer not found in the lattice");
            out.coeffs[lat.class_of(*stab)] += (deg % 2 == 0) ? 1 : -1;
        }
    }
    return out;
}

} // namespace endotriv
