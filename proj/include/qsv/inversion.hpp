#pragma once

#include <functional>
#include <string>

#include "qsv/check_result.hpp"
#include "qsv/kahan.hpp"
#include "qsv/qcore.hpp"
#include "qsv/rational.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

/// A lower-triangular inverse pair (f_{nk}), (g_{kl}) given either by the
/// general two-sequence product form or by its q-Pochhammer specialization
/// (a_j -> a + q^j, c_j -> a + b q^j, d -> c).
struct MatrixPairSpec {
    enum class Kind { krattenthaler_general, corollary_special };

    Kind kind = Kind::corollary_special;

    // general form
    std::function<Rational(long)> a_seq;
    std::function<Rational(long)> c_seq;
    Rational d;

    // special form
    Rational a, b, c, q;

    static MatrixPairSpec general(std::function<Rational(long)> a_seq,
                                  std::function<Rational(long)> c_seq, Rational d) {
        MatrixPairSpec p;
        p.kind = Kind::krattenthaler_general;
        p.a_seq = std::move(a_seq);
        p.c_seq = std::move(c_seq);
        p.d = std::move(d);
        return p;
    }

    static MatrixPairSpec special(Rational a, Rational b, Rational c, Rational q) {
        MatrixPairSpec p;
        p.kind = Kind::corollary_special;
        p.a = std::move(a);
        p.b = std::move(b);
        p.c = std::move(c);
        p.q = std::move(q);
        if (!(p.q > 0 && p.q < 1))
            throw std::invalid_argument("MatrixPairSpec: base must lie in (0,1)");
        return p;
    }
};

namespace detail {

inline Rational nonzero(Rational v, const char* what) {
    if (v == 0) throw DomainError(std::string("inversion: vanishing ") + what);
    return v;
}

}  // namespace detail

/// f_{nk} = prod_{j=k}^{n-1} (a_j - d/c_k)(a_j - c_k) / prod_{j=k+1}^{n} (c_j - d/c_k)(c_j - c_k),
/// and for the special kind
/// f_{nk} = (1/b;q)_{n-k} (A q^k / D;q)_{n-k} / ((q;q)_{n-k} (A b q^{k+1} / D;q)_{n-k})
/// with A = a + b q^k, D = c - a A. Zero for n < k; 1 on the diagonal.
inline Rational f_entry(const MatrixPairSpec& pair, long n, long k) {
    if (n < k) return Rational(0);
    if (pair.kind == MatrixPairSpec::Kind::krattenthaler_general) {
        const Rational ck = detail::nonzero(pair.c_seq(k), "c_k");
        const Rational dck = pair.d / ck;
        Rational num(1), den(1);
        for (long j = k; j < n; ++j) {
            const Rational aj = pair.a_seq(j);
            num *= (aj - dck) * (aj - ck);
        }
        for (long j = k + 1; j <= n; ++j) {
            const Rational cj = pair.c_seq(j);
            den *= detail::nonzero(cj - dck, "c_j - d/c_k") * detail::nonzero(cj - ck, "c_j - c_k");
        }
        return num / den;
    }
    const Rational qk = rat_pow(pair.q, k);
    const Rational A = pair.a + pair.b * qk;
    const Rational D = detail::nonzero(pair.c - pair.a * A, "c - a(a + b q^k)");
    if (pair.b == 0) throw DomainError("inversion: b must be nonzero");
    const Rational num = qpoch_exact(Rational(1) / pair.b, pair.q, n - k) *
                         qpoch_exact(A * qk / D, pair.q, n - k);
    const Rational den = qpoch_exact(pair.q, pair.q, n - k) *
                         detail::nonzero(qpoch_exact(A * pair.b * qk * pair.q / D, pair.q, n - k),
                                         "(A b q^{k+1}/D;q)_{n-k}");
    return num / den;
}

/// g_{kl} = ((a_l c_l - d)(a_l - c_l) / ((a_k c_k - d)(a_k - c_k)))
///          * prod_{j=l+1}^{k} (a_j - d/c_k)(a_j - c_k) / prod_{j=l}^{k-1} (c_j - d/c_k)(c_j - c_k),
/// and for the special kind the signed form
/// g_{kl} = (-1)^{k-l} q^{C(k-l,2)} ((c-(a+bq^l)(a+q^l))/(c-(a+bq^k)(a+q^k)))
///          * (q^{l-k+1}/b;q)_{k-l} (A q^{l+1}/D;q)_{k-l} / ((q;q)_{k-l} (A b q^l/D;q)_{k-l}).
inline Rational g_entry(const MatrixPairSpec& pair, long k, long l) {
    if (k < l) return Rational(0);
    if (pair.kind == MatrixPairSpec::Kind::krattenthaler_general) {
        const Rational ck = detail::nonzero(pair.c_seq(k), "c_k");
        const Rational dck = pair.d / ck;
        const Rational al = pair.a_seq(l), cl = pair.c_seq(l);
        const Rational ak = pair.a_seq(k);
        Rational r = (al * cl - pair.d) * (al - cl);
        r /= detail::nonzero(ak * ck - pair.d, "a_k c_k - d") * detail::nonzero(ak - ck, "a_k - c_k");
        for (long j = l + 1; j <= k; ++j) {
            const Rational aj = pair.a_seq(j);
            r *= (aj - dck) * (aj - ck);
        }
        for (long j = l; j < k; ++j) {
            const Rational cj = pair.c_seq(j);
            r /= detail::nonzero(cj - dck, "c_j - d/c_k") * detail::nonzero(cj - ck, "c_j - c_k");
        }
        return r;
    }
    const Rational qk = rat_pow(pair.q, k);
    const Rational ql = rat_pow(pair.q, l);
    const Rational A = pair.a + pair.b * qk;
    const Rational D = detail::nonzero(pair.c - pair.a * A, "c - a(a + b q^k)");
    if (pair.b == 0) throw DomainError("inversion: b must be nonzero");
    Rational r = rat_pow(pair.q, binom2(k - l));
    if ((k - l) % 2 != 0) r = -r;
    r *= pair.c - (pair.a + pair.b * ql) * (pair.a + ql);
    r /= detail::nonzero(pair.c - A * (pair.a + qk), "c - (a+bq^k)(a+q^k)");
    r *= qpoch_exact(rat_pow(pair.q, l - k + 1) / pair.b, pair.q, k - l) *
         qpoch_exact(A * ql * pair.q / D, pair.q, k - l);
    r /= qpoch_exact(pair.q, pair.q, k - l) *
         detail::nonzero(qpoch_exact(A * pair.b * ql / D, pair.q, k - l), "(A b q^l/D;q)_{k-l}");
    return r;
}

/// sum_{l <= k <= n} f_{nk} g_{kl}, exactly. Equals 1 for n = l and 0 for n > l
/// when the pair really is an inverse pair.
inline Rational delta_check(const MatrixPairSpec& pair, long n, long l) {
    if (n < l) throw std::invalid_argument("delta_check: requires n >= l");
    Rational s(0);
    for (long k = l; k <= n; ++k) s += f_entry(pair, n, k) * g_entry(pair, k, l);
    return s;
}

/// sum_{l <= k <= n} g_{nk} f_{kl}: the opposite composition, which must also
/// be the Kronecker delta for triangular two-sided inverses.
inline Rational delta_check_reversed(const MatrixPairSpec& pair, long n, long l) {
    if (n < l) throw std::invalid_argument("delta_check_reversed: requires n >= l");
    Rational s(0);
    for (long k = l; k <= n; ++k) s += g_entry(pair, n, k) * f_entry(pair, k, l);
    return s;
}

/// Floating-point entries of the special pair, for use inside the infinite
/// sums of apply_inverse_relation.
inline double f_entry_special(double a, double b, double c, Base q, long n, long k) {
    if (n < k) return 0.0;
    const double qk = std::pow(q.q, static_cast<double>(k));
    const double A = a + b * qk;
    const double D = c - a * A;
    if (D == 0.0 || b == 0.0) throw DomainError("f_entry_special: vanishing denominator");
    return qpoch_finite(1.0 / b, q, n - k) * qpoch_finite(A * qk / D, q, n - k) /
           (qpoch_finite(q.q, q, n - k) * qpoch_finite(A * b * qk * q.q / D, q, n - k));
}

inline double g_entry_special(double a, double b, double c, Base q, long k, long l) {
    if (k < l) return 0.0;
    const double qk = std::pow(q.q, static_cast<double>(k));
    const double ql = std::pow(q.q, static_cast<double>(l));
    const double A = a + b * qk;
    const double D = c - a * A;
    if (D == 0.0 || b == 0.0) throw DomainError("g_entry_special: vanishing denominator");
    const long d = k - l;
    // q^{C(d,2)} underflows while (q^{l-k+1}/b;q)_d overflows for large d, so
    // fold them together factor by factor and accumulate in log space:
    //   q^{C(d,2)} (q^{1-d}/b;q)_d = prod_{j=0}^{d-1} q^j (1 - q^{1-d+j}/b)
    double log_abs = 0.0;
    int sign = (d % 2 != 0) ? -1 : 1;
    {
        double qj = 1.0;
        double u = std::pow(q.q, static_cast<double>(1 - d));  // q^{1-d+j}
        for (long j = 0; j < d; ++j) {
            const double factor = qj * (1.0 - u / b);
            if (factor == 0.0) return 0.0;
            if (factor < 0.0) sign = -sign;
            log_abs += std::log(std::fabs(factor));
            qj *= q.q;
            u *= q.q;
        }
    }
    auto fold = [&](double x, long count, int dir) {
        double xq = x;
        for (long j = 0; j < count; ++j) {
            const double factor = 1.0 - xq;
            if (factor == 0.0) {
                if (dir > 0) {
                    sign = 0;
                    return;
                }
                throw DomainError("g_entry_special: vanishing denominator factor");
            }
            if (factor < 0.0) sign = -sign;
            log_abs += dir * std::log(std::fabs(factor));
            xq *= q.q;
        }
    };
    fold(A * ql * q.q / D, d, +1);
    fold(q.q, d, -1);
    fold(A * b * ql / D, d, -1);
    if (sign == 0) return 0.0;
    const double ratio = (c - (a + b * ql) * (a + ql)) / (c - A * (a + qk));
    return sign * std::exp(log_abs) * ratio;
}

/// One rotated inverse-relation check: sequences (a_n), (b_k) and a pair of
/// entry suppliers. Direction f_to_g evaluates sum_{n>=k} f_{nk} a_n against
/// b_k; direction g_to_f evaluates sum_{k>=l} g_{kl} b_k against a_l.
struct InverseRelationCase {
    enum class Direction { f_to_g, g_to_f };

    std::function<double(long, long)> f;  // (row n, col k)
    std::function<double(long, long)> g;  // (row k, col l)
    std::function<double(long)> a_seq;
    std::function<double(long)> b_seq;
    Direction direction = Direction::g_to_f;
    TruncationPolicy truncation = kDefaultPolicy;
};

/// Evaluates the selected direction's infinite sum at the given index and
/// reports the deviation from the predicted sequence value. The convergence
/// conditions of the rotated relations are not known a priori, so a tail
/// that fails to decay within budget is reported as diverged.
inline CheckResult apply_inverse_relation(const InverseRelationCase& rel, long target_index,
                                          double tol = 1e-9) {
    const TruncationPolicy& policy = rel.truncation;
    KahanAccumulator sum;
    int small_run = 0;
    long terms = 0;
    try {
        for (long i = target_index;; ++i) {
            const double entry = rel.direction == InverseRelationCase::Direction::f_to_g
                                     ? rel.f(i, target_index)
                                     : rel.g(i, target_index);
            const double term = entry * (rel.direction == InverseRelationCase::Direction::f_to_g
                                             ? rel.a_seq(i)
                                             : rel.b_seq(i));
            sum.add(term);
            ++terms;
            if (!std::isfinite(term) || std::fabs(term) > 1e12 * (1.0 + std::fabs(sum.value())))
                return diverged_result("inverse-relation terms grow at index " + std::to_string(i));
            if (terms >= policy.max_terms)
                return diverged_result("inverse-relation tail did not decay within max_terms");
            if (std::fabs(term) < std::max(policy.abs_floor, policy.rel_floor * std::fabs(sum.value()))) {
                if (++small_run >= policy.consecutive_small) break;
            } else {
                small_run = 0;
            }
        }
        const double predicted = rel.direction == InverseRelationCase::Direction::f_to_g
                                     ? rel.b_seq(target_index)
                                     : rel.a_seq(target_index);
        return make_check(sum.value(), predicted, tol, terms);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

}  // namespace qsv
