#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include "qsv/check_result.hpp"
#include "qsv/kahan.hpp"
#include "qsv/qcore.hpp"
#include "qsv/rational.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

enum class IdentityId {
    Q_KUMMER,
    ROGERS_6PHI5,
    HEINE_II,
    LEM23_3PHI2,
    Q_GAUSS,
    LEM23_M1_CASE,
    CURIOUS_3_1,
    TEN_PHI_9,
    TERMINATING_3_2,
    THEOREM_3_1,
    QUADRATIC_3_4,
    THEOREM_3_2,
    THEOREM_3_3,
};

inline std::string_view to_string(IdentityId id) {
    switch (id) {
        case IdentityId::Q_KUMMER: return "Q_KUMMER";
        case IdentityId::ROGERS_6PHI5: return "ROGERS_6PHI5";
        case IdentityId::HEINE_II: return "HEINE_II";
        case IdentityId::LEM23_3PHI2: return "LEM23_3PHI2";
        case IdentityId::Q_GAUSS: return "Q_GAUSS";
        case IdentityId::LEM23_M1_CASE: return "LEM23_M1_CASE";
        case IdentityId::CURIOUS_3_1: return "CURIOUS_3_1";
        case IdentityId::TEN_PHI_9: return "TEN_PHI_9";
        case IdentityId::TERMINATING_3_2: return "TERMINATING_3_2";
        case IdentityId::THEOREM_3_1: return "THEOREM_3_1";
        case IdentityId::QUADRATIC_3_4: return "QUADRATIC_3_4";
        case IdentityId::THEOREM_3_2: return "THEOREM_3_2";
        case IdentityId::THEOREM_3_3: return "THEOREM_3_3";
    }
    return "UNKNOWN";
}

namespace detail {

inline void screen_denominator(double value, double scale, long k, const char* what) {
    if (std::fabs(value) < 1e-6 * std::max(1.0, std::fabs(scale)))
        throw DomainError(std::string("near-pole in ") + what + " at k=" + std::to_string(k));
}

/// Rejects samples whose sum suffers cancellation beyond what the target
/// tolerance can absorb: with per-term accuracy around 2e-14, a result is
/// only trustworthy to ~2e-14 * peak/|value|. Such draws sit near the zero
/// set of the identity's products and are screened like near-poles.
inline void screen_cancellation(double peak, double value, double tol, const char* what) {
    const double cond_max = std::clamp(tol * 5e12, 1e2, 1e6);
    if (peak > cond_max * std::max(std::fabs(value), 1e-300))
        throw DomainError(std::string("ill-conditioned sample: cancellation in ") + what);
}

/// Outer k-sum driver with the shared stopping rule.
struct OuterSum {
    KahanAccumulator acc;
    double peak = 0.0;
    int small_run = 0;
    long terms = 0;

    // Returns true once converged under the policy.
    bool add(double term, const TruncationPolicy& policy) {
        acc.add(term);
        peak = std::max(peak, std::fabs(term));
        ++terms;
        if (terms >= policy.max_terms)
            throw TruncationError("outer sum: max_terms exceeded", acc.value(), terms);
        if (std::fabs(term) < std::max(policy.abs_floor, policy.rel_floor * std::fabs(acc.value()))) {
            if (++small_run >= policy.consecutive_small) return true;
        } else {
            small_run = 0;
        }
        return false;
    }

    void check_conditioning(double tol, const char* what) const {
        screen_cancellation(peak, acc.value(), tol, what);
    }
};

inline SeriesSpec qspec(std::vector<double> num, std::vector<double> den, double q, double z) {
    SeriesSpec s;
    s.kind = SeriesKind::q_hypergeometric;
    s.numerator_params = std::move(num);
    s.denominator_params = std::move(den);
    s.base = q;
    s.argument = z;
    return s;
}

}  // namespace detail

/// q-Kummer: 2phi1(a,b; aq/b; q,-q/b) against the base-q/base-q^2 product
/// (-q;q)_inf (aq;q^2)_inf (aq^2/b^2;q^2)_inf / ((-q/b;q)_inf (aq/b;q)_inf),
/// valid for |q/b| < 1.
inline CheckResult check_q_kummer(double a, double b, Base base, const TruncationPolicy& policy = kDefaultPolicy,
                                  double tol = 1e-9) {
    const double q = base.q;
    if (!(std::fabs(q / b) < 1.0)) return skipped_pole_result("constraint |q/b| < 1 violated");
    try {
        const Base base2{q * q};
        const auto lhs = eval_series_ex(detail::qspec({a, b}, {a * q / b}, q, -q / b), policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the q-Kummer series");
        const double den1 = qpoch_infinite(-q / b, base, policy);
        const double den2 = qpoch_infinite(a * q / b, base, policy);
        detail::screen_denominator(den1, 1.0, 0, "(-q/b;q)_inf");
        detail::screen_denominator(den2, 1.0, 0, "(aq/b;q)_inf");
        const double rhs = qpoch_infinite(-q, base, policy) * qpoch_infinite(a * q, base2, policy) *
                           qpoch_infinite(a * q * q / (b * b), base2, policy) / (den1 * den2);
        return make_check(lhs.value, rhs, tol, lhs.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Rogers' nonterminating very-well-poised 6phi5 summation, |aq/bcd| < 1.
/// Requires a > 0 so that sqrt(a) stays real.
inline CheckResult check_rogers_6phi5(double a, double b, double c, double d, Base base,
                                      const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-9) {
    const double q = base.q;
    if (!(a > 0.0)) return skipped_pole_result("a must be positive for a real sqrt(a)");
    const double z = a * q / (b * c * d);
    if (!(std::fabs(z) < 1.0)) return skipped_pole_result("constraint |aq/bcd| < 1 violated");
    try {
        const double sa = std::sqrt(a);
        const auto lhs = eval_series_ex(
            detail::qspec({a, q * sa, -q * sa, b, c, d},
                          {sa, -sa, a * q / b, a * q / c, a * q / d}, q, z),
            policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the poised 6phi5 series");
        const double den = qpoch_infinite(a * q / b, base, policy) * qpoch_infinite(a * q / c, base, policy) *
                           qpoch_infinite(a * q / d, base, policy) * qpoch_infinite(z, base, policy);
        detail::screen_denominator(den, 1.0, 0, "6phi5 product denominator");
        const double rhs = qpoch_infinite(a * q, base, policy) * qpoch_infinite(a * q / (b * c), base, policy) *
                           qpoch_infinite(a * q / (b * d), base, policy) *
                           qpoch_infinite(a * q / (c * d), base, policy) / den;
        return make_check(lhs.value, rhs, tol, lhs.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Second iterate of Heine's transformation, |z| < 1 and |c/b| < 1.
inline CheckResult check_heine_ii(double a, double b, double c, double z, Base base,
                                  const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-9) {
    const double q = base.q;
    if (!(std::fabs(z) < 1.0 && std::fabs(c / b) < 1.0))
        return skipped_pole_result("constraint |z| < 1, |c/b| < 1 violated");
    try {
        const auto lhs = eval_series_ex(detail::qspec({a, b}, {c}, q, z), policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the transformed 2phi1");
        const double den = qpoch_infinite(c, base, policy) * qpoch_infinite(z, base, policy);
        detail::screen_denominator(den, 1.0, 0, "(c;q)_inf (z;q)_inf");
        const double pref = qpoch_infinite(c / b, base, policy) * qpoch_infinite(b * z, base, policy) / den;
        const auto inner = eval_series_ex(detail::qspec({a * b * z / c, b}, {b * z}, q, c / b), policy);
        detail::screen_cancellation(inner.peak_term, inner.value, tol, "the transformed-side 2phi1");
        return make_check(lhs.value, pref * inner.value, tol, lhs.terms_used + inner.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// (m+1)-term 3phi2 summation: the nonterminating 3phi2(a,b,dq^m; c,d) with
/// argument c q^{-m}/(ab) against a q-Gauss-type product times a terminating
/// 3phi2 with argument q. Valid for |c q^{-m}/(ab)| < 1.
inline CheckResult check_lemma23(double a, double b, double c, double d, int m, Base base,
                                 const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-9) {
    const double q = base.q;
    const double z = c * std::pow(q, -m) / (a * b);
    if (!(std::fabs(z) < 1.0)) return skipped_pole_result("constraint |c q^-m / ab| < 1 violated");
    try {
        const double qm = std::pow(q, static_cast<double>(m));
        const auto lhs = eval_series_ex(detail::qspec({a, b, d * qm}, {c, d}, q, z), policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the nonterminating 3phi2");
        const double den = qpoch_infinite(c, base, policy) * qpoch_infinite(c / (a * b), base, policy);
        detail::screen_denominator(den, 1.0, 0, "(c;q)_inf (c/ab;q)_inf");
        const double pref = qpoch_infinite(c / a, base, policy) * qpoch_infinite(c / b, base, policy) / den;
        const auto fin = eval_series_ex(
            detail::qspec({a, b, std::pow(q, static_cast<double>(-m))}, {a * b * q / c, d}, q, q), policy);
        detail::screen_cancellation(fin.peak_term, fin.value, tol, "the terminating 3phi2");
        return make_check(lhs.value, pref * fin.value, tol, lhs.terms_used + fin.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// The m = 1 instance written with its explicit two-term correction factor
/// (1 - (1-a)(1-b) / ((1-abq/c)(1-d))).
inline CheckResult check_lemma23_m1(double a, double b, double c, double d, Base base,
                                    const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-9) {
    const double q = base.q;
    const double z = c / (a * b * q);
    if (!(std::fabs(z) < 1.0)) return skipped_pole_result("constraint |c/(abq)| < 1 violated");
    try {
        const auto lhs = eval_series_ex(detail::qspec({a, b, d * q}, {c, d}, q, z), policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the three-parameter series");
        detail::screen_denominator(1.0 - a * b * q / c, 1.0, 0, "1 - abq/c");
        detail::screen_denominator(1.0 - d, 1.0, 0, "1 - d");
        const double corr = 1.0 - (1.0 - a) * (1.0 - b) / ((1.0 - a * b * q / c) * (1.0 - d));
        const double den = qpoch_infinite(c, base, policy) * qpoch_infinite(c / (a * b), base, policy);
        detail::screen_denominator(den, 1.0, 0, "(c;q)_inf (c/ab;q)_inf");
        const double rhs = corr * qpoch_infinite(c / a, base, policy) * qpoch_infinite(c / b, base, policy) / den;
        return make_check(lhs.value, rhs, tol, lhs.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Classical q-Gauss summation 2phi1(a,b;c;q,c/ab), |c/ab| < 1.
inline CheckResult check_q_gauss(double a, double b, double c, Base base,
                                 const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-9) {
    const double q = base.q;
    const double z = c / (a * b);
    if (!(std::fabs(z) < 1.0)) return skipped_pole_result("constraint |c/ab| < 1 violated");
    try {
        const auto lhs = eval_series_ex(detail::qspec({a, b}, {c}, q, z), policy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the q-Gauss series");
        const double den = qpoch_infinite(c, base, policy) * qpoch_infinite(z, base, policy);
        detail::screen_denominator(den, 1.0, 0, "(c;q)_inf (c/ab;q)_inf");
        const double rhs = qpoch_infinite(c / a, base, policy) * qpoch_infinite(c / b, base, policy) / den;
        return make_check(lhs.value, rhs, tol, lhs.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// The nonhypergeometric expansion of (b^2 q;q)_inf / (bq;q)_inf as a k-sum
/// whose summand carries the rational prefactors
///   (c-(a+1)(a+b))/(c-(a+1)(a+bq^k)) * (c-(a+bq^k)^2)/(c-(a+b)(a+bq^k))
/// and infinite products evaluated per term. Converges for |bq| < 1.
inline CheckResult check_curious_3_1(double a, double b, double c, Base base,
                                     const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    const double q = base.q;
    if (!(std::fabs(b * q) < 1.0)) return skipped_pole_result("constraint |bq| < 1 violated");
    try {
        const double lhs = qpoch_infinite(b * b * q, base, policy) / qpoch_infinite(b * q, base, policy);
        detail::OuterSum sum;
        double poch_b = 1.0, poch_q = 1.0, zk = 1.0, qk = 1.0;
        for (long k = 0;; ++k) {
            const double w = a + b * qk;
            const double D = c - a * w;
            detail::screen_denominator(D, c, k, "c - a(a+bq^k)");
            const double d1 = c - (a + 1.0) * w;
            const double d2 = c - (a + b) * w;
            detail::screen_denominator(d1, c, k, "c - (a+1)(a+bq^k)");
            detail::screen_denominator(d2, c, k, "c - (a+b)(a+bq^k)");
            const double den_inf = qpoch_infinite(w * b * q / D, base, policy);
            detail::screen_denominator(den_inf, 1.0, k, "(w b q / D;q)_inf");
            double term = (c - (a + 1.0) * (a + b)) / d1 * (c - w * w) / d2;
            term *= poch_b * qpoch_finite(w / D, base, k) * qpoch_infinite(w * b * b * q * qk / D, base, policy);
            term /= poch_q * den_inf;
            term *= zk;
            if (sum.add(term, policy)) break;
            poch_b *= (1.0 - b * qk);
            poch_q *= (1.0 - q * qk);
            qk *= q;
            zk *= b * q;
        }
        sum.check_conditioning(tol, "the quadratic-prefactor expansion");
        return make_check(lhs, sum.acc.value(), tol, sum.terms);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Terminating very-well-poised 10phi9 summation with argument q; RHS is the
/// four-Pochhammer quotient (aq;q)_n (a^2 q/b^2;q)_n / ((aq/b;q)_n (a^2 q/b;q)_n).
/// Needs a, b > 0 for real square roots.
inline CheckResult check_10phi9(double a, double b, int n, Base base, double tol = 1e-11) {
    const double q = base.q;
    if (!(a > 0.0 && b > 0.0)) return skipped_pole_result("a, b must be positive for real roots");
    try {
        const double sa = std::sqrt(a), sb = std::sqrt(b), sbq = std::sqrt(b * q);
        const double sqb = std::sqrt(q / b);
        const double qn1 = std::pow(q, static_cast<double>(n + 1));
        SeriesSpec s = detail::qspec(
            {a, q * sa, -q * sa, sb, -sb, sbq, -sbq, a / b, a * a * qn1 / b, std::pow(q, static_cast<double>(-n))},
            {sa, -sa, a * q / sb, -a * q / sb, a * sqb, -a * sqb, b * q, b * std::pow(q, static_cast<double>(-n)) / a,
             a * qn1},
            q, q);
        for (double x : s.denominator_params) {
            double qj = 1.0;
            for (int j = 0; j < n; ++j) {
                detail::screen_denominator(1.0 - x * qj, 1.0, j, "10phi9 denominator factor");
                qj *= q;
            }
        }
        const auto lhs = eval_series_ex(s, kDefaultPolicy);
        detail::screen_cancellation(lhs.peak_term, lhs.value, tol, "the terminating poised series");
        const double den = qpoch_finite(a * q / b, base, n) * qpoch_finite(a * a * q / b, base, n);
        detail::screen_denominator(den, 1.0, n, "(aq/b;q)_n (a^2q/b;q)_n");
        const double rhs = qpoch_finite(a * q, base, n) * qpoch_finite(a * a * q / (b * b), base, n) / den;
        return make_check(lhs.value, rhs, tol, lhs.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    }
}

struct ExactCheck {
    Rational lhs, rhs;
    bool equal = false;
};

/// Exact-rational 10phi9 verification. The parameters enter through their
/// square roots, so a = sqrt_a^2, b = sqrt_b^2, q = sqrt_q^2 keep every
/// series parameter rational.
inline ExactCheck check_10phi9_exact(const Rational& sqrt_a, const Rational& sqrt_b, int n,
                                     const Rational& sqrt_q) {
    const Rational a = sqrt_a * sqrt_a, b = sqrt_b * sqrt_b, q = sqrt_q * sqrt_q;
    const Rational sbq = sqrt_b * sqrt_q;         // sqrt(bq)
    const Rational sqb = sqrt_q / sqrt_b;         // sqrt(q/b)
    const Rational qn1 = rat_pow(q, n + 1);
    ExactSeriesSpec s;
    s.numerator_params = {a,  q * sqrt_a, -q * sqrt_a, sqrt_b, -sqrt_b, sbq, -sbq,
                          a / b, a * a * qn1 / b, rat_pow(q, -n)};
    s.denominator_params = {sqrt_a, -sqrt_a, a * q / sqrt_b, -a * q / sqrt_b, a * sqb, -a * sqb,
                            b * q, b * rat_pow(q, -n) / a, a * qn1};
    s.base = q;
    s.argument = q;
    ExactCheck r;
    r.lhs = eval_series_exact(s);
    const Rational den = qpoch_exact(a * q / b, q, n) * qpoch_exact(a * a * q / b, q, n);
    if (den == 0) throw DomainError("check_10phi9_exact: vanishing RHS denominator");
    r.rhs = qpoch_exact(a * q, q, n) * qpoch_exact(a * a * q / (b * b), q, n) / den;
    r.equal = (r.lhs == r.rhs);
    return r;
}

namespace detail {

/// Shared summand machinery of the terminating expansion of
/// (c^2 q;q)_n / (cq;q)_n. Templated over the scalar so the float and the
/// exact-rational routes stay textually identical.
template <typename T, typename QPochK>
T terminating_3_2_sum(const T& a, const T& b, const T& c, int n, const T& q, QPochK&& poch,
                      double* peak_out = nullptr) {
    // poch(x, k) must return (x;q)_k for k >= 0.
    T sum(0);
    const T qinvn = [&] { T r(1); for (int i = 0; i < n; ++i) r /= q; return r; }();
    T qmk(1);  // q^{-k}
    for (int k = 0; k <= n; ++k) {
        const T am = a - qmk;
        const T u = (b + a * am) / am;
        const T A = (b + (a - c) * (a - T(1))) / (b + (a - c) * am);
        const T B = (b + am * am) / (b + (a - T(1)) * am);
        const T num = poch(qinvn, k) * poch(c, k) * poch(u / c, k);
        const T den = poch(q, k) * poch(qinvn / c, k) * poch(c * q * u, k);
        const T tail = poch(c * q * u, n) / poch(q * u, n);
        T qk(1);
        for (int i = 0; i < k; ++i) qk *= q;
        const T term = A * B * (num / den) * tail * qk;
        if constexpr (std::is_same_v<T, double>) {
            if (peak_out) *peak_out = std::max(*peak_out, std::fabs(term));
        }
        sum += term;
        qmk /= q;
    }
    return sum;
}

}  // namespace detail

/// Terminating expansion of (c^2 q;q)_n / (cq;q)_n whose summand involves
/// q^{-k}-shifted quadratic prefactors and a Pochhammer carried at both a
/// k-indexed and an n-indexed position. Floating evaluation with compensated
/// accumulation happens termwise below; this is the plain finite sum.
inline CheckResult check_terminating_3_2(double a, double b, double c, int n, Base base, double tol = 1e-10) {
    const double q = base.q;
    try {
        // screens: a must stay away from q^{-k} and the three quadratic
        // denominators away from zero for every k <= n
        double qmk = 1.0;
        for (int k = 0; k <= n; ++k) {
            const double am = a - qmk;
            detail::screen_denominator(am, 1.0, k, "a - q^{-k}");
            detail::screen_denominator(b + (a - c) * am, b, k, "b + (a-c)(a-q^{-k})");
            detail::screen_denominator(b + (a - 1.0) * am, b, k, "b + (a-1)(a-q^{-k})");
            const double u = (b + a * am) / am;
            detail::screen_denominator(qpoch_finite(c * q * u, base, n), 1.0, k, "(cqu;q)_n");
            detail::screen_denominator(qpoch_finite(q * u, base, n), 1.0, k, "(qu;q)_n");
            qmk /= q;
        }
        detail::screen_denominator(qpoch_finite(std::pow(q, -n) / c, base, n), 1.0, n, "(q^{-n}/c;q)_n");
        double peak = 0.0;
        const double sum = detail::terminating_3_2_sum<double>(
            a, b, c, n, q, [&](double x, int k) { return qpoch_finite(x, base, k); }, &peak);
        detail::screen_cancellation(peak, sum, tol, "the terminating expansion");
        const double lhs = qpoch_finite(c * c * q, base, n) / qpoch_finite(c * q, base, n);
        return make_check(lhs, sum, tol, n + 1);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    }
}

inline ExactCheck check_terminating_3_2_exact(const Rational& a, const Rational& b, const Rational& c,
                                              int n, const Rational& q) {
    ExactCheck r;
    r.rhs = detail::terminating_3_2_sum<Rational>(
        a, b, c, n, q, [&](const Rational& x, int k) { return qpoch_exact(x, q, k); });
    const Rational den = qpoch_exact(c * q, q, n);
    if (den == 0) throw DomainError("check_terminating_3_2_exact: (cq;q)_n vanishes");
    r.lhs = qpoch_exact(c * c * q, q, n) / den;
    r.equal = (r.lhs == r.rhs);
    return r;
}

/// Alternating expansion of (-bq;q)_inf / (-q;q)_inf with mixed base-q and
/// base-q^2 infinite products in the summand.
inline CheckResult check_theorem_3_1(double a, double b, double c, Base base,
                                     const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    const double q = base.q;
    try {
        const Base base2{q * q};
        const double lhs = qpoch_infinite(-b * q, base, policy) / qpoch_infinite(-q, base, policy);
        detail::OuterSum sum;
        double poch_b = 1.0, poch_q = 1.0, qk = 1.0;
        double sign = 1.0;
        for (long k = 0;; ++k) {
            const double w = a + b * qk;
            const double D = c - a * w;
            detail::screen_denominator(D, c, k, "c - a(a+bq^k)");
            const double d1 = c - (a + 1.0) * w;
            const double d2 = c - (a + b) * w;
            detail::screen_denominator(d1, c, k, "c - (a+1)(a+bq^k)");
            detail::screen_denominator(d2, c, k, "c - (a+b)(a+bq^k)");
            const double den_inf = qpoch_infinite(w * b * q / D, base, policy);
            const double den_inf2 = qpoch_infinite(w * qk / D, base2, policy);
            detail::screen_denominator(den_inf, 1.0, k, "(w b q/D;q)_inf");
            detail::screen_denominator(den_inf2, 1.0, k, "(w q^k/D;q^2)_inf");
            double term = (c - (a + 1.0) * (a + b)) / d1 * (c - w * w) / d2;
            term *= poch_b * qpoch_infinite(w / D, base, policy) / (poch_q * den_inf);
            term *= qpoch_infinite(w * b * b * q * q * qk / D, base2, policy) / den_inf2;
            term *= sign * qk;
            if (sum.add(term, policy)) break;
            poch_b *= (1.0 - b * qk);
            poch_q *= (1.0 - q * qk);
            qk *= q;
            sign = -sign;
        }
        sum.check_conditioning(tol, "the alternating expansion");
        return make_check(lhs, sum.acc.value(), tol, sum.terms);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Quadratic expansion of (-bq;q)_inf (abq;q)_inf / ((-q;q)_inf (a;q)_inf).
/// Also recomputes the sum through its even/odd split into two base-q^2
/// 3phi2 series and fails if the two routes disagree. Requires |a| < 1.
inline CheckResult check_quadratic_3_4(double a, double b, Base base,
                                       const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-10) {
    const double q = base.q;
    if (!(std::fabs(a) < 1.0)) return skipped_pole_result("constraint |a| < 1 violated");
    try {
        const Base base2{q * q};
        const double lhs = qpoch_infinite(-b * q, base, policy) * qpoch_infinite(a * b * q, base, policy) /
                           (qpoch_infinite(-q, base, policy) * qpoch_infinite(a, base, policy));
        detail::OuterSum sum;
        double poch_b = 1.0, poch_q = 1.0, qk = 1.0, sign = 1.0;
        for (long k = 0;; ++k) {
            const double den2 = qpoch_infinite(a * qk, base2, policy);
            detail::screen_denominator(den2, 1.0, k, "(a q^k;q^2)_inf");
            double term = poch_b / poch_q *
                          qpoch_infinite(a * b * b * q * q * qk, base2, policy) / den2 * sign * qk;
            if (sum.add(term, policy)) break;
            poch_b *= (1.0 - b * qk);
            poch_q *= (1.0 - q * qk);
            qk *= q;
            sign = -sign;
        }
        sum.check_conditioning(tol, "the quadratic identity sum");
        // parity split: even part minus q(1-b)/(1-q)-weighted odd part,
        // both base-q^2 3phi2 series with argument q^2
        const double q2 = q * q;
        const double even = qpoch_infinite(a * b * b * q2, base2, policy) / qpoch_infinite(a, base2, policy) *
                            eval_series(detail::qspec({b, b * q, a}, {q, a * b * b * q2}, q2, q2), policy);
        const double odd = q * (1.0 - b) / (1.0 - q) *
                           qpoch_infinite(a * b * b * q2 * q, base2, policy) /
                           qpoch_infinite(a * q, base2, policy) *
                           eval_series(detail::qspec({b * q, b * q2, a * q}, {q2 * q, a * b * b * q2 * q}, q2, q2),
                                       policy);
        const double split = even - odd;
        CheckResult r = make_check(lhs, sum.acc.value(), tol, sum.terms);
        const double split_dev =
            std::fabs(split - sum.acc.value()) / std::max({std::fabs(split), std::fabs(sum.acc.value()), 1e-300});
        // recombination accuracy degrades with the cancellation level of the
        // alternating sum; 1e-11 applies to well-conditioned points
        const double cond = sum.peak / std::max(std::fabs(sum.acc.value()), 1e-300);
        const double split_tol = std::max(1e-11, 2e-13 * cond);
        if (split_dev > split_tol) {
            r.status = CheckStatus::fail;
            r.note = "parity-split recombination deviates by " + std::to_string(split_dev);
        }
        return r;
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Expansion of (z;q)_inf / (z/b;q)_inf whose summand carries a full inner
/// 2phi1 evaluation; |z/b| < 1, and every inner argument must stay inside
/// the unit disc.
inline CheckResult check_theorem_3_2(double a, double b, double c, double z, Base base,
                                     const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    const double q = base.q;
    if (!(std::fabs(z / b) < 1.0)) return skipped_pole_result("constraint |z/b| < 1 violated");
    try {
        const double lhs = qpoch_infinite(z, base, policy) / qpoch_infinite(z / b, base, policy);
        detail::OuterSum sum;
        long inner_terms = 0;
        double poch_b = 1.0, poch_q = 1.0, qk = 1.0, zk = 1.0;
        for (long k = 0;; ++k) {
            const double w = a + b * qk;
            const double D = c - a * w;
            detail::screen_denominator(D, c, k, "c - a(a+bq^k)");
            const double d1 = c - (a + 1.0) * w;
            const double d2 = c - (a + b) * w;
            detail::screen_denominator(d1, c, k, "c - (a+1)(a+bq^k)");
            detail::screen_denominator(d2, c, k, "c - (a+b)(a+bq^k)");
            const double inner_arg = w * b * b * q * qk / D;
            if (!(std::fabs(inner_arg) < 1.0))
                throw DivergenceError("inner 2phi1 argument leaves the unit disc at k=" + std::to_string(k));
            const auto inner =
                eval_series_ex(detail::qspec({1.0 / b, z / (b * b * q)}, {z / b}, q, inner_arg), kInnerPolicy);
            detail::screen_cancellation(inner.peak_term, inner.value, tol, "the inner 2phi1");
            inner_terms += inner.terms_used;
            const double den_inf = qpoch_infinite(w * b * q / D, base, policy);
            detail::screen_denominator(den_inf, 1.0, k, "(w b q/D;q)_inf");
            double term = (c - (a + 1.0) * (a + b)) / d1 * (c - w * w) / d2 * inner.value;
            term *= poch_b * qpoch_finite(w / D, base, k) * qpoch_infinite(inner_arg, base, policy);
            term /= poch_q * den_inf;
            term *= zk;
            if (sum.add(term, policy)) break;
            poch_b *= (1.0 - b * qk);
            poch_q *= (1.0 - q * qk);
            qk *= q;
            zk *= z / b;
        }
        sum.check_conditioning(tol, "the inner-2phi1 expansion");
        return make_check(lhs, sum.acc.value(), tol, sum.terms + inner_terms);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Expansion of (b^2 q;q)_inf / (bq;q)_inf whose summand carries an inner
/// terminating 3phi2 and the weight (e q^m;q)_k / (e;q)_k (b q^{1-m})^k;
/// |b q^{1-m}| < 1.
inline CheckResult check_theorem_3_3(double a, double b, double c, double e, int m, Base base,
                                     const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    const double q = base.q;
    const double ratio = b * std::pow(q, 1.0 - m);
    if (!(std::fabs(ratio) < 1.0)) return skipped_pole_result("constraint |b q^{1-m}| < 1 violated");
    try {
        const double lhs = qpoch_infinite(b * b * q, base, policy) / qpoch_infinite(b * q, base, policy);
        const double qmneg = std::pow(q, static_cast<double>(-m));
        {
            double qj = 1.0;  // (1/b^2;q)_j factors of the inner series, j < m
            for (int j = 0; j < m; ++j) {
                detail::screen_denominator(1.0 - qj / (b * b), 1.0, j, "inner (1/b^2;q)_j factor");
                qj *= q;
            }
        }
        detail::OuterSum sum;
        long inner_terms = 0;
        double poch_b = 1.0, poch_q = 1.0, poch_e_ratio = 1.0;  // (eq^m;q)_k / (e;q)_k
        double qk = 1.0, zk = 1.0;
        for (long k = 0;; ++k) {
            const double w = a + b * qk;
            const double D = c - a * w;
            detail::screen_denominator(D, c, k, "c - a(a+bq^k)");
            const double d1 = c - (a + 1.0) * w;
            const double d2 = c - (a + b) * w;
            detail::screen_denominator(d1, c, k, "c - (a+1)(a+bq^k)");
            detail::screen_denominator(d2, c, k, "c - (a+b)(a+bq^k)");
            const auto inner = eval_series_ex(
                detail::qspec({1.0 / b, w * qk / D, qmneg}, {1.0 / (b * b), e * qk}, q, q), kInnerPolicy);
            detail::screen_cancellation(inner.peak_term, inner.value, tol, "the inner terminating 3phi2");
            inner_terms += inner.terms_used;
            const double den_inf = qpoch_infinite(w * b * q / D, base, policy);
            detail::screen_denominator(den_inf, 1.0, k, "(w b q/D;q)_inf");
            double term = (c - (a + 1.0) * (a + b)) / d1 * (c - w * w) / d2 * inner.value * poch_e_ratio;
            term *= poch_b * qpoch_finite(w / D, base, k) *
                    qpoch_infinite(w * b * b * q * qk / D, base, policy);
            term /= poch_q * den_inf;
            term *= zk;
            if (sum.add(term, policy)) break;
            const double ef = 1.0 - e * qk;
            detail::screen_denominator(ef, 1.0, k, "(e;q)_k factor");
            poch_e_ratio *= (1.0 - e * std::pow(q, static_cast<double>(m)) * qk) / ef;
            poch_b *= (1.0 - b * qk);
            poch_q *= (1.0 - q * qk);
            qk *= q;
            zk *= ratio;
        }
        sum.check_conditioning(tol, "the e-weighted expansion");
        return make_check(lhs, sum.acc.value(), tol, sum.terms + inner_terms);
    } catch (const DomainError& e2) {
        return skipped_pole_result(e2.what());
    } catch (const DivergenceError& e2) {
        return diverged_result(e2.what());
    } catch (const TruncationError& e2) {
        return diverged_result(e2.what());
    }
}

}  // namespace qsv
