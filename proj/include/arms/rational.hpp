#pragma once
// Small exact rational type. Values stay tiny (arm ladders up to j=20),
// but intermediates go through __int128 and overflow throws rather than wraps.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace arms {

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    double to_double() const { return double(num) / double(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

namespace detail {
inline long long narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
    return (long long)v;
}
inline Rational make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { n /= a; d /= a; }
    return Rational{detail::narrow(n), detail::narrow(d)};
}
} // namespace detail

inline Rational operator+(const Rational& a, const Rational& b) {
    return detail::make((__int128)a.num * b.den + (__int128)b.num * a.den,
                        (__int128)a.den * b.den);
}
inline Rational operator-(const Rational& a, const Rational& b) {
    return detail::make((__int128)a.num * b.den - (__int128)b.num * a.den,
                        (__int128)a.den * b.den);
}
inline Rational operator*(const Rational& a, const Rational& b) {
    return detail::make((__int128)a.num * b.num, (__int128)a.den * b.den);
}
inline Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational division by zero");
    return detail::make((__int128)a.num * b.den, (__int128)a.den * b.num);
}
inline Rational operator-(const Rational& a) { return Rational{-a.num, a.den}; }

// exact square root when num and den are both perfect squares
inline std::optional<Rational> sqrt_exact(const Rational& r) {
    if (r.num < 0) return std::nullopt;
    auto isqrt = [](long long v) -> std::optional<long long> {
        if (v < 0) return std::nullopt;
        long long s = (long long)std::sqrt((double)v);
        for (long long c = s > 1 ? s - 2 : 0; c <= s + 2; ++c)
            if (c * c == v) return c;
        return std::nullopt;
    };
    auto n = isqrt(r.num);
    auto d = isqrt(r.den);
    if (!n || !d) return std::nullopt;
    return Rational{*n, *d};
}

} // namespace arms
