#pragma once

#include "int_matrix.hpp"
#include "subgroup_lattice.hpp"

#include <cstdint>
#include <vector>

namespace endotriv {

/// Integer function on conjugacy classes of p-subgroups, indexed by the
/// canonical ordering of the p-subposet.
struct SuperclassFn {
    std::uint64_t p = 0;
    IntVector values;

    std::size_t size() const { return values.size(); }
    const Integer& operator[](std::size_t i) const { return values[i]; }
    Integer& operator[](std::size_t i) { return values[i]; }

    friend bool operator==(const SuperclassFn&, const SuperclassFn&) = default;

    SuperclassFn operator+(const SuperclassFn& o) const
    {
        SuperclassFn r = *this;
        for (std::size_t i = 0; i < size(); ++i)
            r.values[i] += o.values[i];
        return r;
    }

    SuperclassFn operator-(const SuperclassFn& o) const
    {
        SuperclassFn r = *this;
        for (std::size_t i = 0; i < size(); ++i)
            r.values[i] -= o.values[i];
        return r;
    }

    SuperclassFn operator-() const
    {
        SuperclassFn r = *this;
        for (auto& v : r.values)
            v = -v;
        return r;
    }
};

inline SuperclassFn superclass_fn(std::uint64_t p, std::initializer_list<long long> v)
{
    return {p, int_vector(v)};
}

/// Subconjugacy indicator W[R][Q] = [R <=_G Q] on p-subgroup classes and its
/// exact inverse. Entries of the inverse are the Möbius function mu(P, Q) of
/// the class poset.
class OmegaMatrix {
public:
    explicit OmegaMatrix(const PSubposet& poset) : p_(poset.p), w_(poset.size(), poset.size())
    {
        for (std::size_t r = 0; r < poset.size(); ++r)
            for (std::size_t q = 0; q < poset.size(); ++q)
                w_(r, q) = poset.leq[r][q] ? 1 : 0;
        // Canonical order is ascending in subgroup order, so W is upper unitriangular.
        w_inv_ = unitriangular_inverse(w_);
    }

    std::uint64_t prime() const { return p_; }
    std::size_t size() const { return w_.rows(); }
    const IntMatrix& matrix() const { return w_; }
    const IntMatrix& inverse() const { return w_inv_; }
    const Integer& mobius(std::size_t p_class, std::size_t q_class) const { return w_inv_(p_class, q_class); }

private:
    std::uint64_t p_;
    IntMatrix w_;
    IntMatrix w_inv_;
};

/// omega_Q: 1 on classes subconjugate to Q.
inline SuperclassFn omega(const OmegaMatrix& w, std::size_t q)
{
    return {w.prime(), w.matrix().column(q)};
}

inline SuperclassFn idempotent(std::size_t n, std::uint64_t p, std::size_t q)
{
    SuperclassFn e{p, IntVector(n, 0)};
    e[q] = 1;
    return e;
}

/// Coefficients b with e_Q = sum_P b_P omega_P, i.e. column Q of W^-1.
inline IntVector idempotent_basis_coeffs(const OmegaMatrix& w, std::size_t q)
{
    return w.inverse().column(q);
}

/// b = W^-1 f, so that f = sum_P b_P omega_P.
inline IntVector mobius_inversion(const OmegaMatrix& w, const SuperclassFn& f)
{
    if (f.size() != w.size())
        throw ValidationError("mobius_inversion: length mismatch");
    return w.inverse() * f.values;
}

/// sum_P b_P omega_P.
inline SuperclassFn from_omega_coeffs(const OmegaMatrix& w, const IntVector& b)
{
    if (b.size() != w.size())
        throw ValidationError("from_omega_coeffs: length mismatch");
    return {w.prime(), w.matrix() * b};
}

} // namespace endotriv
