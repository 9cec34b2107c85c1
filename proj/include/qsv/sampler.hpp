#pragma once

#include <cstdint>
#include <string_view>

#include "qsv/rational.hpp"

namespace qsv {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace detail

/// Deterministic splitmix-style stream keyed by (seed, stream id, sample
/// index). Identical inputs yield identical draws on every platform, which
/// keeps verification reports byte-reproducible.
class SampleRng {
 public:
    SampleRng(std::uint64_t seed, std::string_view stream_id, std::uint64_t index) {
        state_ = seed ^ detail::fnv1a64(stream_id);
        detail::splitmix64(state_);
        state_ ^= 0xA0761D6478BD642Full * (index + 1);
        detail::splitmix64(state_);
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], both inclusive.
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
    }

    double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    /// Signed rational with numerator in [1, max_num] and denominator in
    /// [1, max_den].
    Rational small_rational(long max_num, long max_den, bool allow_negative = true) {
        const long num = uniform_int(1, max_num);
        const long den = uniform_int(1, max_den);
        Rational r(num, den);
        if (allow_negative && (next_u64() & 1)) r = -r;
        return r;
    }

    /// Rational strictly inside (0,1).
    Rational rational_in_01(long max_den = 40) {
        const long den = uniform_int(2, max_den);
        const long num = uniform_int(1, den - 1);
        return Rational(num, den);
    }

 private:
    std::uint64_t state_;
};

}  // namespace qsv
