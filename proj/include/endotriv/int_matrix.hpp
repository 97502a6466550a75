#pragma once

#include "errors.hpp"
#include "integer.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace endotriv {

/// Dense matrix of arbitrary-precision integers, row-major.
///
/// Matrices in this library stay small (tens of rows), so everything is
/// dense. Tensor-scale data lives in FpMatrix instead.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw ValidationError("IntMatrix: ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    /// Columns given as vectors of equal length `rows`.
    static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols)
    {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows)
                throw ValidationError("IntMatrix::from_columns: wrong column length");
            for (std::size_t i = 0; i < rows; ++i)
                m(i, j) = cols[j][i];
        }
        return m;
    }

    static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows)
    {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw ValidationError("IntMatrix::from_rows: wrong row length");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    IntVector column(std::size_t c) const
    {
        IntVector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    IntVector row(std::size_t r) const
    {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    std::vector<IntVector> columns() const
    {
        std::vector<IntVector> out;
        for (std::size_t c = 0; c < cols_; ++c)
            out.push_back(column(c));
        return out;
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    IntVector operator*(const IntVector& v) const
    {
        if (v.size() != cols_)
            throw ValidationError("IntMatrix * vector: size mismatch");
        IntVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out[r] += (*this)(r, c) * v[c];
        return out;
    }

    IntMatrix operator*(const IntMatrix& o) const
    {
        if (cols_ != o.rows_)
            throw ValidationError("IntMatrix product: size mismatch");
        IntMatrix out(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(r, k) == 0)
                    continue;
                for (std::size_t c = 0; c < o.cols_; ++c)
                    out(r, c) += (*this)(r, k) * o(k, c);
            }
        return out;
    }

    /// Keep the first n columns.
    IntMatrix leading_columns(std::size_t n) const
    {
        IntMatrix out(rows_, n);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) = (*this)(r, c);
        return out;
    }

    void swap_columns(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t r = 0; r < rows_; ++r)
            std::swap((*this)(r, a), (*this)(r, b));
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t c = 0; c < cols_; ++c)
            std::swap((*this)(a, c), (*this)(b, c));
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

namespace detail {

// col_a <- s*col_a + t*col_b ; col_b <- u*col_a + v*col_b  (applied to m)
inline void combine_columns(IntMatrix& m, std::size_t a, std::size_t b, const Integer& s, const Integer& t,
                            const Integer& u, const Integer& v)
{
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Integer x = m(r, a), y = m(r, b);
        m(r, a) = s * x + t * y;
        m(r, b) = u * x + v * y;
    }
}

inline void add_column_multiple(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& k)
{
    if (k == 0)
        return;
    for (std::size_t r = 0; r < m.rows(); ++r)
        m(r, dst) += k * m(r, src);
}

inline void negate_column(IntMatrix& m, std::size_t c)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        m(r, c) = -m(r, c);
}

} // namespace detail

struct HermiteResult {
    IntMatrix form;      // column HNF, same shape as the input
    IntMatrix transform; // unimodular U with input * U = form
    std::size_t rank = 0;
};

/// Column Hermite normal form with unimodular transform.
///
/// Pivots are the top-most nonzero entry of each nonzero column; pivot rows
/// strictly increase from left to right, pivots are positive, and entries to
/// the left of a pivot in its row are reduced into [0, pivot). Zero columns
/// come last.
inline HermiteResult hermite_with_transform(const IntMatrix& m)
{
    HermiteResult res{m, IntMatrix::identity(m.cols()), 0};
    IntMatrix& h = res.form;
    IntMatrix& u = res.transform;
    std::size_t k = 0;
    for (std::size_t r = 0; r < h.rows() && k < h.cols(); ++r) {
        for (std::size_t j = k + 1; j < h.cols(); ++j) {
            if (h(r, j) == 0)
                continue;
            if (h(r, k) == 0) {
                h.swap_columns(k, j);
                u.swap_columns(k, j);
                continue;
            }
            auto [g, s, t] = ext_gcd(h(r, k), h(r, j));
            Integer a = h(r, k) / g, b = h(r, j) / g;
            // [s -b; t a] has determinant s*a + t*b = 1.
            detail::combine_columns(h, k, j, s, t, -b, a);
            detail::combine_columns(u, k, j, s, t, -b, a);
        }
        if (h(r, k) == 0)
            continue;
        if (h(r, k) < 0) {
            detail::negate_column(h, k);
            detail::negate_column(u, k);
        }
        for (std::size_t j = 0; j < k; ++j) {
            Integer q = floor_div(h(r, j), h(r, k));
            detail::add_column_multiple(h, j, k, -q);
            detail::add_column_multiple(u, j, k, -q);
        }
        ++k;
    }
    res.rank = k;
    return res;
}

inline IntMatrix hnf(const IntMatrix& m) { return hermite_with_transform(m).form; }

/// Basis of the integer kernel {x : m x = 0}, as columns.
inline IntMatrix integer_kernel(const IntMatrix& m)
{
    auto res = hermite_with_transform(m);
    IntMatrix out(m.cols(), m.cols() - res.rank);
    for (std::size_t j = res.rank; j < m.cols(); ++j)
        for (std::size_t r = 0; r < m.cols(); ++r)
            out(r, j - res.rank) = res.transform(r, j);
    return out;
}

/// A finitely generated abelian group Z^free_rank + sum Z/torsion[i], with
/// torsion[0] | torsion[1] | ... and every factor > 1.
struct AbelianInvariants {
    std::vector<Integer> torsion;
    std::size_t free_rank = 0;

    bool is_trivial() const { return torsion.empty() && free_rank == 0; }

    /// Order of the torsion part.
    Integer torsion_order() const
    {
        Integer n = 1;
        for (const auto& d : torsion)
            n *= d;
        return n;
    }

    std::string to_string() const
    {
        std::string s;
        if (free_rank > 0)
            s = "Z^" + std::to_string(free_rank);
        for (const auto& d : torsion)
            s += (s.empty() ? "" : " + ") + ("Z/" + d.str());
        return s.empty() ? "0" : s;
    }

    friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Diagonal of the Smith normal form (nonnegative, divisibility chain,
/// zeros dropped).
inline std::vector<Integer> smith_diagonal(IntMatrix a)
{
    std::vector<Integer> diag;
    const std::size_t rows = a.rows(), cols = a.cols();
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block moves to (t, t).
            std::size_t pr = rows, pc = cols;
            for (std::size_t r = t; r < rows; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (a(r, c) != 0 && (pr == rows || abs_value(a(r, c)) < abs_value(a(pr, pc)))) {
                        pr = r;
                        pc = c;
                    }
            if (pr == rows)
                return diag;
            a.swap_rows(t, pr);
            a.swap_columns(t, pc);

            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                if (a(r, t) == 0)
                    continue;
                Integer q = a(r, t) / a(t, t);
                for (std::size_t c = t; c < cols; ++c)
                    a(r, c) -= q * a(t, c);
                if (a(r, t) != 0)
                    clean = false;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                if (a(t, c) == 0)
                    continue;
                Integer q = a(t, c) / a(t, t);
                for (std::size_t r = t; r < rows; ++r)
                    a(r, c) -= q * a(r, t);
                if (a(t, c) != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // Pivot must divide the whole trailing block.
            bool divides = true;
            for (std::size_t r = t + 1; r < rows && divides; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (a(r, c) % a(t, t) != 0) {
                        for (std::size_t k = t; k < cols; ++k)
                            a(t, k) += a(r, k);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        diag.push_back(abs_value(a(t, t)));
    }
    return diag;
}

/// Invariants of coker(m) = Z^rows / (column span of m).
inline AbelianInvariants snf_invariants(const IntMatrix& m)
{
    auto diag = smith_diagonal(m);
    AbelianInvariants out;
    out.free_rank = m.rows() - diag.size();
    for (const auto& d : diag)
        if (d > 1)
            out.torsion.push_back(d);
    return out;
}

/// A sublattice of Z^n, stored as its canonical column HNF basis.
class IntegerLattice {
public:
    IntegerLattice() = default;

    /// Lattice spanned by the columns of `generators` (rows = ambient rank).
    static IntegerLattice spanned_by(const IntMatrix& generators)
    {
        auto res = hermite_with_transform(generators);
        IntegerLattice l;
        l.ambient_ = generators.rows();
        l.basis_ = res.form.leading_columns(res.rank);
        for (std::size_t j = 0; j < res.rank; ++j) {
            std::size_t r = 0;
            while (l.basis_(r, j) == 0)
                ++r;
            l.pivots_.push_back(r);
        }
        return l;
    }

    static IntegerLattice full(std::size_t n) { return spanned_by(IntMatrix::identity(n)); }

    std::size_t ambient_rank() const { return ambient_; }
    std::size_t rank() const { return basis_.cols(); }
    const IntMatrix& basis() const { return basis_; }
    std::vector<IntVector> basis_vectors() const { return basis_.columns(); }

    /// Canonical representative of v + L (pivot coordinates reduced into [0, pivot)).
    IntVector reduce(IntVector v) const
    {
        if (v.size() != ambient_)
            throw ValidationError("IntegerLattice::reduce: wrong vector length");
        for (std::size_t j = 0; j < rank(); ++j) {
            Integer q = floor_div(v[pivots_[j]], basis_(pivots_[j], j));
            if (q != 0)
                for (std::size_t r = 0; r < ambient_; ++r)
                    v[r] -= q * basis_(r, j);
        }
        return v;
    }

    bool contains(const IntVector& v) const
    {
        auto r = reduce(v);
        return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
    }

    bool contains(const IntegerLattice& other) const
    {
        if (other.ambient_ != ambient_)
            return false;
        for (std::size_t j = 0; j < other.rank(); ++j)
            if (!contains(other.basis_.column(j)))
                return false;
        return true;
    }

    /// Index in Z^n; 0 when the lattice is not of full rank.
    Integer index() const
    {
        if (rank() != ambient_)
            return 0;
        Integer d = 1;
        for (std::size_t j = 0; j < rank(); ++j)
            d *= basis_(pivots_[j], j);
        return d;
    }

    friend bool operator==(const IntegerLattice& a, const IntegerLattice& b)
    {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_ = 0;
    IntMatrix basis_;
    std::vector<std::size_t> pivots_;
};

struct Congruence {
    IntVector row;
    Integer modulus;
};

/// {f in Z^n : equalities * f = 0 and row . f = 0 mod modulus for every congruence}.
///
/// Each congruence gets an auxiliary unknown t with row . f - modulus * t = 0;
/// the integer kernel of the stacked system is projected back onto the first
/// n coordinates.
inline IntegerLattice solve_congruence_lattice(std::size_t n, const std::vector<IntVector>& equalities,
                                               const std::vector<Congruence>& congruences)
{
    const std::size_t c = congruences.size();
    IntMatrix a(equalities.size() + c, n + c);
    for (std::size_t i = 0; i < equalities.size(); ++i) {
        if (equalities[i].size() != n)
            throw ValidationError("solve_congruence_lattice: equality row has wrong length");
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = equalities[i][j];
    }
    for (std::size_t k = 0; k < c; ++k) {
        const auto& cg = congruences[k];
        if (cg.row.size() != n)
            throw ValidationError("solve_congruence_lattice: congruence row has wrong length");
        if (cg.modulus < 1)
            throw ValidationError("solve_congruence_lattice: modulus must be >= 1");
        const std::size_t i = equalities.size() + k;
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = cg.row[j];
        a(i, n + k) = -cg.modulus;
    }
    IntMatrix kernel = integer_kernel(a);
    IntMatrix projected(n, kernel.cols());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < kernel.cols(); ++j)
            projected(r, j) = kernel(r, j);
    return IntegerLattice::spanned_by(projected);
}

/// Z^n / sub.
inline AbelianInvariants lattice_quotient(std::size_t n, const IntegerLattice& sub)
{
    if (sub.ambient_rank() != n)
        throw ValidationError("lattice_quotient: ambient rank mismatch");
    return snf_invariants(sub.basis());
}

/// Exact inverse of a unitriangular (upper, ones on the diagonal) matrix.
inline IntMatrix unitriangular_inverse(const IntMatrix& w)
{
    const std::size_t n = w.rows();
    if (w.cols() != n)
        throw ValidationError("unitriangular_inverse: matrix not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (w(i, i) != 1)
            throw ValidationError("unitriangular_inverse: diagonal entry is not 1");
        for (std::size_t j = 0; j < i; ++j)
            if (w(i, j) != 0)
                throw ValidationError("unitriangular_inverse: matrix is not upper triangular");
    }
    IntMatrix inv = IntMatrix::identity(n);
    // Back substitution column by column: w * inv = I.
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = n; i-- > 0;) {
            Integer s = (i == col) ? 1 : 0;
            for (std::size_t k = i + 1; k < n; ++k)
                s -= w(i, k) * inv(k, col);
            inv(i, col) = s;
        }
    return inv;
}

} // namespace endotriv
