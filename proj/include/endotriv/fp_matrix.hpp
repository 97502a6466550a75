#pragma once

#include "errors.hpp"
#include "integer.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace endotriv {

/// Dense matrix over F_p, row-major, entries in [0, p).
///
/// Differentials of tensor products reach a few thousand rows; dense storage
/// is fine below roughly 20000 total basis points, which is the default
/// tensor budget. A sparse format would only be needed beyond that.
class FpMatrix {
public:
    using Elem = std::uint32_t;

    FpMatrix() = default;
    FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0)
    {
        if (!is_prime(p))
            throw ValidationError("FpMatrix: p = " + std::to_string(p) + " is not prime");
    }
    FpMatrix(std::uint64_t p, std::initializer_list<std::initializer_list<long long>> rows)
        : FpMatrix(p, rows.size(), rows.size() == 0 ? 0 : rows.begin()->size())
    {
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw ValidationError("FpMatrix: ragged initializer");
            std::size_t j = 0;
            for (auto v : r)
                set(i, j++, v);
            ++i;
        }
    }

    static FpMatrix identity(std::uint64_t p, std::size_t n)
    {
        FpMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::uint64_t prime() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    void set(std::size_t r, std::size_t c, long long v)
    {
        long long m = v % static_cast<long long>(p_);
        if (m < 0)
            m += static_cast<long long>(p_);
        (*this)(r, c) = static_cast<Elem>(m);
    }

    Elem add(Elem a, Elem b) const { return static_cast<Elem>((std::uint64_t{a} + b) % p_); }
    Elem sub(Elem a, Elem b) const { return static_cast<Elem>((std::uint64_t{a} + p_ - b) % p_); }
    Elem mul(Elem a, Elem b) const { return static_cast<Elem>((std::uint64_t{a} * b) % p_); }
    Elem neg(Elem a) const { return a == 0 ? 0 : static_cast<Elem>(p_ - a); }

    Elem inverse(Elem a) const
    {
        // Fermat: a^(p-2)
        std::uint64_t result = 1, base = a, e = p_ - 2;
        while (e) {
            if (e & 1)
                result = result * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<Elem>(result);
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
    }

    FpMatrix operator*(const FpMatrix& o) const
    {
        if (cols_ != o.rows_ || p_ != o.p_)
            throw ValidationError("FpMatrix product: shape or prime mismatch");
        FpMatrix out(p_, rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                Elem a = (*this)(r, k);
                if (a == 0)
                    continue;
                const Elem* src = &o.data_[k * o.cols_];
                Elem* dst = &out.data_[r * o.cols_];
                for (std::size_t c = 0; c < o.cols_; ++c)
                    if (src[c])
                        dst[c] = static_cast<Elem>((dst[c] + std::uint64_t{a} * src[c]) % p_);
            }
        return out;
    }

    FpMatrix operator-(const FpMatrix& o) const
    {
        FpMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] = sub(data_[i], o.data_[i]);
        return out;
    }

    FpMatrix operator+(const FpMatrix& o) const
    {
        FpMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] = add(data_[i], o.data_[i]);
        return out;
    }

    FpMatrix scaled(long long s) const
    {
        FpMatrix out(p_, rows_, cols_);
        long long m = s % static_cast<long long>(p_);
        if (m < 0)
            m += static_cast<long long>(p_);
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] = mul(data_[i], static_cast<Elem>(m));
        return out;
    }

    FpMatrix transpose() const
    {
        FpMatrix t(p_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    FpMatrix submatrix(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const
    {
        FpMatrix out(p_, row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out(i, j) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    std::vector<Elem> column(std::size_t c) const
    {
        std::vector<Elem> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

private:
    std::uint64_t p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Elem> data_;
};

/// Reduced row echelon form with pivot columns.
struct FpEchelon {
    FpMatrix rref;
    std::vector<std::size_t> pivot_cols;

    std::size_t rank() const { return pivot_cols.size(); }
};

inline FpEchelon fp_rref(FpMatrix m)
{
    FpEchelon out;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, c) == 0)
            ++piv;
        if (piv == m.rows())
            continue;
        if (piv != row)
            for (std::size_t k = 0; k < m.cols(); ++k)
                std::swap(m(piv, k), m(row, k));
        auto inv = m.inverse(m(row, c));
        for (std::size_t k = c; k < m.cols(); ++k)
            m(row, k) = m.mul(m(row, k), inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, c) == 0)
                continue;
            auto f = m(r, c);
            for (std::size_t k = c; k < m.cols(); ++k)
                if (m(row, k))
                    m(r, k) = m.sub(m(r, k), m.mul(f, m(row, k)));
        }
        out.pivot_cols.push_back(c);
        ++row;
    }
    out.rref = std::move(m);
    return out;
}

inline std::size_t fp_rank(const FpMatrix& m)
{
    // Eliminate on the shorter side.
    if (m.rows() > m.cols())
        return fp_rref(m.transpose()).rank();
    return fp_rref(m).rank();
}

/// Basis of {x : m x = 0} as the columns of the result.
inline FpMatrix fp_kernel_basis(const FpMatrix& m)
{
    auto e = fp_rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols)
        is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    FpMatrix k(m.prime(), m.cols(), free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        k(free_cols[j], j) = 1;
        for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
            k(e.pivot_cols[i], j) = k.neg(e.rref(i, free_cols[j]));
    }
    return k;
}

inline std::size_t fp_kernel_dim(const FpMatrix& m) { return m.cols() - fp_rank(m); }

/// dim ker(d_out) - rank(d_in) at the space d_in maps into and d_out maps out of.
inline std::size_t fp_homology_dim(const FpMatrix& d_in, const FpMatrix& d_out)
{
    if (d_in.rows() != d_out.cols())
        throw ValidationError("fp_homology_dim: middle dimensions disagree");
    if (!(d_out * d_in).is_zero())
        throw ValidationError("fp_homology_dim: d_out * d_in != 0");
    return fp_kernel_dim(d_out) - fp_rank(d_in);
}

/// Inverse of a square matrix, or nullopt if singular.
inline std::optional<FpMatrix> fp_inverse(const FpMatrix& m)
{
    const std::size_t n = m.rows();
    if (m.cols() != n)
        return std::nullopt;
    FpMatrix aug(m.prime(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto e = fp_rref(std::move(aug));
    if (e.rank() < n || e.pivot_cols[n - 1] != n - 1)
        return std::nullopt;
    FpMatrix inv(m.prime(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv(i, j) = e.rref(i, n + j);
    return inv;
}

/// Coordinates of the columns of `targets` in the basis formed by the
/// (independent) columns of `basis`; throws if some target is outside the span.
inline FpMatrix fp_solve_in_basis(const FpMatrix& basis, const FpMatrix& targets)
{
    const std::size_t n = basis.rows(), k = basis.cols();
    FpMatrix aug(basis.prime(), n, k + targets.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            aug(i, j) = basis(i, j);
        for (std::size_t j = 0; j < targets.cols(); ++j)
            aug(i, k + j) = targets(i, j);
    }
    auto e = fp_rref(std::move(aug));
    std::size_t basis_rank = 0;
    for (auto c : e.pivot_cols)
        if (c < k)
            ++basis_rank;
    if (basis_rank != k)
        throw ValidationError("fp_solve_in_basis: basis columns are dependent");
    if (e.rank() != k)
        throw ValidationError("fp_solve_in_basis: target outside the span");
    FpMatrix out(basis.prime(), k, targets.cols());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < targets.cols(); ++j)
            out(i, j) = e.rref(i, k + j);
    return out;
}

} // namespace endotriv
