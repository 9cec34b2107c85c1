#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "qsv/kahan.hpp"
#include "qsv/rational.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

/// The base q of a q-series, restricted to the open interval (0,1).
struct Base {
    double q;

    explicit Base(double q_) : q(q_) {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("Base: q must lie strictly inside (0,1)");
    }
};

/// (a;q)_k for any integer k.
///   k >= 0:  prod_{j=0}^{k-1} (1 - a q^j)
///   k <  0:  1 / prod_{j=1}^{|k|} (1 - a q^{-j})
inline double qpoch_finite(double a, Base base, long k) {
    const double q = base.q;
    double r = 1.0;
    if (k >= 0) {
        double aq = a;
        for (long j = 0; j < k; ++j) {
            r *= (1.0 - aq);
            aq *= q;
        }
        return r;
    }
    double qinv = 1.0;
    for (long j = 1; j <= -k; ++j) {
        qinv /= q;
        const double f = 1.0 - a * qinv;
        if (f == 0.0)
            throw DomainError("qpoch_finite: vanishing factor at negative index j=" + std::to_string(j));
        r /= f;
    }
    return r;
}

/// (a;q)_inf as a partial product, truncated once |a q^j| has stayed below
/// abs_floor for consecutive_small successive j. Convergence is guaranteed
/// for q in (0,1).
inline double qpoch_infinite(double a, Base base, const TruncationPolicy& policy = kDefaultPolicy) {
    const double q = base.q;
    double r = 1.0;
    double aq = a;
    int small_run = 0;
    for (long j = 0; j < policy.max_terms; ++j) {
        r *= (1.0 - aq);
        if (std::fabs(aq) < policy.abs_floor) {
            if (++small_run >= policy.consecutive_small) return r;
        } else {
            small_run = 0;
        }
        aq *= q;
    }
    throw TruncationError("qpoch_infinite: max_terms exceeded", r, policy.max_terms);
}

/// Sign/magnitude representation of log (a;q)_inf.
struct LogValue {
    double log_abs;
    int sign;  // +1, -1, or 0 for an exactly vanishing product

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// log (a;q)_inf via the power-sum expansion
///   log (u;q)_inf = -sum_{m>=1} u^m / (m (1 - q^m)),   |u| < 1,
/// peeling leading factors until |u| is small. Cost is O(1) in 1/(1-q),
/// which keeps q-integral grids near q = 1 affordable where the plain
/// product needs tens of thousands of factors.
inline LogValue log_qpoch_infinite(double a, Base base) {
    const double q = base.q;
    double u = a;
    double log_abs = 0.0;
    int sign = 1;
    long peeled = 0;
    while (std::fabs(u) > 0.75) {
        const double f = 1.0 - u;
        if (f == 0.0) return LogValue{0.0, 0};
        if (f < 0.0) sign = -sign;
        log_abs += std::log(std::fabs(f));
        u *= q;
        if (++peeled > 2000000)
            throw TruncationError("log_qpoch_infinite: peel budget exceeded", log_abs, peeled);
    }
    // -sum u^m / (m (1-q^m)); near q = 1 the early coefficients are large,
    // so accumulate compensated.
    KahanAccumulator s;
    double um = u;
    double qm = q;
    for (long m = 1; m <= 4000; ++m) {
        const double term = um / (static_cast<double>(m) * (1.0 - qm));
        s.add(term);
        if (std::fabs(term) < 1e-20 * (1.0 + std::fabs(s.value())) && m > 4) break;
        um *= u;
        qm *= q;
        if (qm < 1e-300) qm = 0.0;
    }
    log_abs -= s.value();
    return LogValue{log_abs, sign};
}

/// Thomae's q-gamma function (1-q)^{1-x} (q;q)_inf / (q^x;q)_inf.
inline double qgamma(double x, Base base, const TruncationPolicy& policy = kDefaultPolicy) {
    const double q = base.q;
    const double nearest = std::round(x);
    if (nearest <= 0.0 && std::fabs(x - nearest) < 1e-12)
        throw DomainError("qgamma: pole at nonpositive integer x");
    const double qx = std::pow(q, x);
    return std::pow(1.0 - q, 1.0 - x) * qpoch_infinite(q, base, policy) / qpoch_infinite(qx, base, policy);
}

enum class SeriesKind { q_hypergeometric, ordinary_hypergeometric };

/// One r-phi-(r-1) or r-F-(r-1) evaluation: numerator and denominator
/// parameter lists, base (q-kind only), and argument.
struct SeriesSpec {
    SeriesKind kind = SeriesKind::q_hypergeometric;
    std::vector<double> numerator_params;
    std::vector<double> denominator_params;
    double base = 0.5;  // ignored for ordinary kind
    double argument = 0.0;
};

struct SeriesValue {
    double value = 0.0;
    long terms_used = 0;
    double peak_term = 0.0;  // largest |term|; peak/|value| measures cancellation
};

namespace detail {

/// Smallest n <= max_n with |p - q^{-n}| <= 1e-12 q^{-n}, or -1.
inline long terminating_index_q(double p, double q, long max_n) {
    if (!(p > 0.0)) return -1;
    const double n_real = -std::log(p) / std::log(q);
    const long n = std::lround(n_real);
    if (n < 0 || n > max_n) return -1;
    const double qn = std::pow(q, static_cast<double>(-n));
    return std::fabs(p - qn) <= 1e-12 * qn ? n : -1;
}

/// Smallest n <= max_n with p within 1e-12 of -n, or -1.
inline long terminating_index_ordinary(double p, long max_n) {
    const long n = std::lround(-p);
    if (n < 0 || n > max_n) return -1;
    return std::fabs(p + static_cast<double>(n)) <= 1e-12 * std::max(1.0, static_cast<double>(n)) ? n : -1;
}

}  // namespace detail

/// Basic hypergeometric series sum_k prod (a_i;q)_k / ((q;q)_k prod (b_j;q)_k) z^k.
/// Terms are generated by the multiplicative recurrence
///   t_{k+1} = t_k * z * prod (1 - a_i q^k) / ((1 - q^{k+1}) prod (1 - b_j q^k)).
/// Terminating when a numerator parameter matches q^{-n} within relative
/// 1e-12; otherwise requires |z| < 1.
inline SeriesValue eval_series_ex(const SeriesSpec& spec, const TruncationPolicy& policy = kDefaultPolicy) {
    if (spec.kind != SeriesKind::q_hypergeometric)
        throw std::invalid_argument("eval_series: expected q-hypergeometric kind");
    policy.validate();
    const double q = spec.base;
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("eval_series: base must lie in (0,1)");
    const double z = spec.argument;

    long stop_at = -1;  // index of last nonzero term when terminating
    for (double p : spec.numerator_params) {
        const long n = detail::terminating_index_q(p, q, policy.max_terms);
        if (n >= 0 && (stop_at < 0 || n < stop_at)) stop_at = n;
    }
    if (stop_at < 0 && !(std::fabs(z) < 1.0))
        throw DivergenceError("eval_series: nonterminating with |z| >= 1");

    KahanAccumulator sum;
    double term = 1.0;
    double peak = 1.0;
    double qk = 1.0;  // q^k
    int small_run = 0;
    long k = 0;
    for (;; ++k) {
        sum.add(term);
        peak = std::max(peak, std::fabs(term));
        if (stop_at >= 0 && k == stop_at) { ++k; break; }
        if (k + 1 >= policy.max_terms) {
            if (stop_at >= 0) { ++k; break; }
            throw TruncationError("eval_series: max_terms exceeded", sum.value(), k + 1);
        }
        double factor = z;
        for (double a : spec.numerator_params) factor *= (1.0 - a * qk);
        factor /= (1.0 - q * qk);
        for (double b : spec.denominator_params) {
            const double f = 1.0 - b * qk;
            if (f == 0.0)
                throw DomainError("eval_series: denominator parameter hits q^{-" + std::to_string(k) + "}");
            factor /= f;
        }
        term *= factor;
        qk *= q;
        if (stop_at < 0) {
            if (std::fabs(term) < std::max(policy.abs_floor, policy.rel_floor * std::fabs(sum.value()))) {
                if (++small_run >= policy.consecutive_small) { ++k; break; }
            } else {
                small_run = 0;
            }
        }
    }
    return SeriesValue{sum.value(), k, peak};
}

inline double eval_series(const SeriesSpec& spec, const TruncationPolicy& policy = kDefaultPolicy) {
    return eval_series_ex(spec, policy).value;
}

/// Exact-rational terminating series. All parameters, the base, and the
/// argument must be exact; a numerator parameter must equal q^{-n} exactly.
struct ExactSeriesSpec {
    std::vector<Rational> numerator_params;
    std::vector<Rational> denominator_params;
    Rational base;
    Rational argument;
};

inline Rational eval_series_exact(const ExactSeriesSpec& spec, long max_n = 512) {
    const Rational& q = spec.base;
    if (!(q > 0 && q < 1))
        throw std::invalid_argument("eval_series_exact: base must lie in (0,1)");
    long stop_at = -1;
    for (const Rational& p : spec.numerator_params) {
        long n = -1;
        if (is_exact_neg_qpow(p, q, max_n, &n) && (stop_at < 0 || n < stop_at)) stop_at = n;
    }
    if (stop_at < 0)
        throw DivergenceError("eval_series_exact: no numerator parameter equals q^{-n}");

    Rational sum(0), term(1), qk(1);
    for (long k = 0;; ++k) {
        sum += term;
        if (k == stop_at) break;
        Rational factor = spec.argument;
        for (const Rational& a : spec.numerator_params) factor *= (1 - a * qk);
        factor /= (1 - q * qk);
        for (const Rational& b : spec.denominator_params) {
            const Rational f = 1 - b * qk;
            if (f == 0)
                throw DomainError("eval_series_exact: denominator parameter hits q^{-k}");
            factor /= f;
        }
        term *= factor;
        qk *= q;
    }
    return sum;
}

}  // namespace qsv
