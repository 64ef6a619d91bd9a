#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <string>

namespace cantor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string num_str(const Rational& r) { return numerator(r).str(); }
inline std::string den_str(const Rational& r) { return denominator(r).str(); }

Rational rational_from_strings(const std::string& num, const std::string& den);

// Exact power r^e for e >= 0.
inline Rational rpow(const Rational& r, long e) {
    Rational acc(1);
    Rational base = r;
    for (long k = e; k > 0; k >>= 1) {
        if (k & 1) acc *= base;
        base *= base;
    }
    return acc;
}

inline Rational pow2(long e) {
    if (e >= 0) return Rational(BigInt(1) << e);
    return Rational(1, BigInt(1) << (-e));
}

// Closed interval stored as midpoint + length (length > 0).
struct Interval {
    Rational mid;
    Rational len;

    Rational lo() const { return mid - len / 2; }
    Rational hi() const { return mid + len / 2; }
};

inline bool contains(const Interval& outer, const Interval& inner) {
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

inline bool disjoint_strict(const Interval& a, const Interval& b) {
    return a.hi() < b.lo() || b.hi() < a.lo();
}

// Largest possible distance between a point of a and a point of b.
inline Rational sup_distance(const Interval& a, const Interval& b) {
    Rational d1 = b.hi() - a.lo();
    Rational d2 = a.hi() - b.lo();
    Rational d = std::max(d1, d2);
    return d < 0 ? Rational(0) : d;
}

// Smallest possible distance (0 when the intervals meet).
inline Rational inf_distance(const Interval& a, const Interval& b) {
    if (a.hi() < b.lo()) return b.lo() - a.hi();
    if (b.hi() < a.lo()) return a.lo() - b.hi();
    return Rational(0);
}

inline Interval hull(const Interval& a, const Interval& b) {
    Rational lo = std::min(a.lo(), b.lo());
    Rational hi = std::max(a.hi(), b.hi());
    return Interval{(lo + hi) / 2, hi - lo};
}

// Decimal string with bounded precision, for reports ("0.0012#" marks truncation).
std::string approx_decimal(const Rational& r, int digits = 12);

}  // namespace cantor
