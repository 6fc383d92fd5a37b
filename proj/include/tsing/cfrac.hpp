#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tsing {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A Hirzebruch-Jung continued fraction [b1,...,br],
//
//     m/q = b1 - 1/(b2 - 1/(... - 1/br)),
//
// stored as its entry tuple.  Every entry is >= 2.
using Chain = std::vector<Int>;

// Parameters of a cyclic quotient singularity of type 1/dn^2 (1, dna-1):
// m = d*n^2, q = d*n*a - 1, with n >= 2, 0 < a < n, gcd(n,a) = 1.
struct TParams {
    Int d;
    Int n;
    Int a;

    bool operator==(const TParams&) const = default;
};

struct Fraction {
    Int m;
    Int q;

    bool operator==(const Fraction&) const = default;
};

inline void require_fraction(const Int& m, const Int& q) {
    if (!(q >= 1 && m > q))
        throw std::invalid_argument("hj fraction needs m > q >= 1");
    if (boost::multiprecision::gcd(m, q) != 1)
        throw std::invalid_argument("hj fraction needs gcd(m,q) = 1");
}

inline void require_chain(const Chain& c) {
    if (c.empty())
        throw std::invalid_argument("chain must be nonempty");
    for (const Int& b : c)
        if (b < 2)
            throw std::invalid_argument("chain entries must be >= 2");
}

// Greedy expansion: b = ceil(m/q), then (m, q) <- (q, b*q - m).  The
// remainder b*q - m lies in [0, q), so the fraction shrinks and every
// subsequent quotient is >= 2; the loop terminates with q = 0.
inline Chain hj_expand(Int m, Int q) {
    require_fraction(m, q);
    Chain out;
    while (q != 0) {
        Int b = (m + q - 1) / q;
        out.push_back(b);
        Int next = b * q - m;
        m = q;
        q = next;
    }
    return out;
}

// Exact right-to-left evaluation.  Intermediate values stay > 1 for
// chains with all entries >= 2, so the reciprocal below never divides
// by zero.
inline Fraction hj_evaluate(const Chain& c) {
    require_chain(c);
    Rational v = c.back();
    for (auto it = std::next(c.rbegin()); it != c.rend(); ++it) {
        if (v <= 1)
            throw std::logic_error("hj_evaluate: intermediate value not > 1");
        v = Rational(*it) - 1 / v;
    }
    return Fraction{boost::multiprecision::numerator(v),
                    boost::multiprecision::denominator(v)};
}

// All (d, n, a) with m = d*n^2, q = d*n*a - 1, n >= 2, 0 < a < n,
// gcd(n, a) = 1, ordered by increasing d.  Brute-force over divisors
// d of m whose cofactor m/d is a perfect square n^2.  Quadratic-ish;
// meant as a small-m oracle for the gcd shortcut below.
inline std::vector<TParams> t_params_all(const Int& m, const Int& q) {
    require_fraction(m, q);
    std::vector<TParams> out;
    for (Int n = 2; n * n <= m; ++n) {
        if (m % (n * n) != 0)
            continue;
        Int d = m / (n * n);
        Int dn = d * n;
        if ((q + 1) % dn != 0)
            continue;
        Int a = (q + 1) / dn;
        if (a <= 0 || a >= n || boost::multiprecision::gcd(n, a) != 1)
            continue;
        out.push_back(TParams{d, n, a});
    }
    std::sort(out.begin(), out.end(),
              [](const TParams& x, const TParams& y) { return x.d < y.d; });
    return out;
}

// Any solution forces gcd(m, q+1) = gcd(d*n^2, d*n*a) = d*n*gcd(n, a)
// = d*n, so n = m / gcd(m, q+1) and the solution is unique.  We verify
// the candidate instead of searching.
inline std::optional<TParams> t_params_from_fraction(const Int& m, const Int& q) {
    require_fraction(m, q);
    Int g = boost::multiprecision::gcd(m, q + 1);
    if (g % (m / g) != 0)
        return std::nullopt;
    Int n = m / g;
    if (n < 2)
        return std::nullopt;
    Int d = g / n;
    Int a = (q + 1) / g;
    if (m != d * n * n || q != d * n * a - 1)
        return std::nullopt;
    if (a <= 0 || a >= n || boost::multiprecision::gcd(n, a) != 1)
        return std::nullopt;
    return TParams{d, n, a};
}

}  // namespace tsing
