#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "qsv/truncation.hpp"

namespace qsv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// x^e for any integer e; x must be nonzero when e < 0.
inline Rational rat_pow(const Rational& x, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (x == 0) throw DomainError("rat_pow: zero base with negative exponent");
        return Rational(1) / rat_pow(x, -e);
    }
    Rational r(1), b = x;
    long n = e;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

/// (a;q)_k in exact arithmetic, any integer k.
inline Rational qpoch_exact(const Rational& a, const Rational& q, long k) {
    Rational r(1);
    if (k >= 0) {
        Rational aq = a;
        for (long j = 0; j < k; ++j) {
            r *= (1 - aq);
            aq *= q;
        }
        return r;
    }
    for (long j = 1; j <= -k; ++j) {
        const Rational f = 1 - a * rat_pow(q, -j);
        if (f == 0) throw DomainError("qpoch_exact: vanishing factor at negative index");
        r /= f;
    }
    return r;
}

/// (a)_k rising factorial in exact arithmetic, k >= 0.
inline Rational rising_exact(const Rational& a, long k) {
    Rational r(1);
    for (long j = 0; j < k; ++j) r *= (a + j);
    return r;
}

/// Detects p == q^{-n} exactly for some 0 <= n <= max_n.
inline bool is_exact_neg_qpow(const Rational& p, const Rational& q, long max_n, long* n_out) {
    Rational r = p;  // p * q^n == 1 at the matching n
    for (long n = 0; n <= max_n; ++n) {
        if (r == 1) {
            if (n_out) *n_out = n;
            return true;
        }
        r *= q;
    }
    return false;
}

inline long binom2(long k) { return k * (k - 1) / 2; }

}  // namespace qsv
