#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace endotriv {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

/// Quotient rounded towards negative infinity; b != 0.
inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

/// Representative of a mod m in [0, |m|).
inline Integer floor_mod(const Integer& a, const Integer& m)
{
    Integer r = a % m;
    if (r < 0)
        r += abs_value(m);
    return r;
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b)
{
    Integer old_r = a, r = b;
    Integer old_s = 1, s = 0;
    Integer old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

inline Integer gcd(const Integer& a, const Integer& b) { return std::get<0>(ext_gcd(a, b)); }

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs_value(a / gcd(a, b) * b);
}

inline std::int64_t to_int64(const Integer& a) { return a.convert_to<std::int64_t>(); }

template <typename Int>
IntVector to_int_vector(const std::vector<Int>& v)
{
    return IntVector(v.begin(), v.end());
}

inline IntVector int_vector(std::initializer_list<long long> v)
{
    return IntVector(v.begin(), v.end());
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// If n = q^e for a prime q and e >= 1, returns q; otherwise 0.
inline std::uint64_t prime_power_base(std::uint64_t n)
{
    if (n < 2)
        return 0;
    std::uint64_t q = 2;
    while (n % q != 0)
        ++q;
    while (n % q == 0)
        n /= q;
    return n == 1 ? q : 0;
}

inline bool is_power_of(std::uint64_t n, std::uint64_t p)
{
    if (n == 0)
        return false;
    while (n % p == 0)
        n /= p;
    return n == 1;
}

} // namespace endotriv
