#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "dualcurve/errors.hpp"

namespace dualcurve {

// Exact rational on 64-bit numerator/denominator with 128-bit intermediates.
// Every finite double is a dyadic rational, so conversion from double is
// exact. Overflow throws rather than wrapping; desk-scale inputs stay far
// below the limits.
struct Rational {
    long long num = 0;
    long long den = 1; // > 0, gcd(|num|, den) == 1

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num = n;
        den = d;
    }

    static Rational from_double(double x);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

namespace detail {
inline long long checked_ll(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw internal_error(std::string("rational overflow in ") + what);
    return static_cast<long long>(v);
}
} // namespace detail

inline Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    return Rational(detail::checked_ll(n, "add"), detail::checked_ll(d, "add"));
}

inline Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    return Rational(detail::checked_ll(n, "sub"), detail::checked_ll(d, "sub"));
}

inline Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce first to keep intermediates small
    long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    __int128 n = static_cast<__int128>(a.num / g1) * (b.num / g2);
    __int128 d = static_cast<__int128>(a.den / g2) * (b.den / g1);
    return Rational(detail::checked_ll(n, "mul"), detail::checked_ll(d, "mul"));
}

inline bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
}

inline bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
inline bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

inline Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite double");
    if (x == 0.0) return Rational(0);
    int e = 0;
    double m = std::frexp(x, &e); // x = m * 2^e, |m| in [0.5, 1)
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    while (mant != 0 && (mant & 1) == 0) { mant >>= 1; ++e; }
    if (e >= 0) {
        if (e > 10) throw std::invalid_argument("Rational: double too large for exact form");
        return Rational(detail::checked_ll(static_cast<__int128>(mant) << e, "from_double"), 1);
    }
    if (e < -62) throw std::invalid_argument("Rational: double too fine for exact form");
    return Rational(mant, 1LL << (-e));
}

// Distance of a/b to the nearest integer, as the exact pair (num, den) with
// num/den in [0, 1/2].
inline Rational nearest_int_norm(const Rational& x) {
    long long m = x.num % x.den;
    if (m < 0) m += x.den;
    long long d = x.den - m;
    return Rational(m < d ? m : d, x.den);
}

} // namespace dualcurve
