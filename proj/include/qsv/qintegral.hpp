#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qsv/check_result.hpp"
#include "qsv/identities.hpp"
#include "qsv/kahan.hpp"
#include "qsv/qcore.hpp"
#include "qsv/quadrature.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

/// An integrand on the geometric grid {q^k}.
struct QIntegrand {
    std::function<double(double)> evaluator;
    std::string label;
};

struct QIntegralValue {
    double value = 0.0;
    long terms_used = 0;
};

namespace detail {

/// (1-q) sum_k f(k, q^k) q^k with compensated accumulation. The index is
/// passed through so integrands can cache per-point state along the grid.
template <typename F>
QIntegralValue q_integrate_indexed(F&& f, Base base, const TruncationPolicy& policy) {
    policy.validate();
    const double q = base.q;
    KahanAccumulator acc;
    double t = 1.0;
    int small_run = 0;
    for (long k = 0; k < policy.max_terms; ++k) {
        const double term = f(k, t) * t;
        acc.add(term);
        if (std::fabs(term) < std::max(policy.abs_floor, policy.rel_floor * std::fabs(acc.value()))) {
            if (++small_run >= policy.consecutive_small)
                return {(1.0 - q) * acc.value(), k + 1};
        } else {
            small_run = 0;
        }
        if (!std::isfinite(acc.value()))
            throw DivergenceError("q_integrate: non-decaying integrand on the q-grid");
        t *= q;
    }
    throw TruncationError("q_integrate: max_terms exceeded", (1.0 - q) * acc.value(), policy.max_terms);
}

}  // namespace detail

inline QIntegralValue q_integrate_ex(const QIntegrand& f, Base base,
                                     const TruncationPolicy& policy = kDefaultPolicy) {
    return detail::q_integrate_indexed([&f](long, double t) { return f.evaluator(t); }, base, policy);
}

inline double q_integrate(const QIntegrand& f, Base base, const TruncationPolicy& policy = kDefaultPolicy) {
    return q_integrate_ex(f, base, policy).value;
}

/// Gamma_q(x) Gamma_q(y) / Gamma_q(x+y) evaluated through log q-Pochhammers,
/// which stays cheap arbitrarily close to q = 1.
inline double qgamma_beta_ratio(double x, double y, Base base) {
    const double lg = log_qpoch_infinite(base.q, base).log_abs +
                      log_qpoch_infinite(std::pow(base.q, x + y), base).log_abs -
                      log_qpoch_infinite(std::pow(base.q, x), base).log_abs -
                      log_qpoch_infinite(std::pow(base.q, y), base).log_abs;
    return (1.0 - base.q) * std::exp(lg);
}

/// Parameters of the q-beta-type integral family.
struct QBetaParams {
    double alpha = 1.0;
    double beta = 1.0;
    double a = 0.0;
    double c = 0.0;
    double e = 0.0;
    int m = 0;
};

namespace detail {

/// Shared six-product kernel of the two q-beta-type integrands:
///   (qt;q)_inf (w/D;q)_inf (w q^{2b+1} t / D;q)_inf
///   -----------------------------------------------
///   (q^b t;q)_inf (w t / D;q)_inf (w q^{b+1} / D;q)_inf
/// with w = a + q^b t, D = c - a w, evaluated in log space. The two purely
/// geometric families (q^{k+1};q)_inf and (q^{b+k};q)_inf are carried across
/// the grid by the one-factor update (u;q)_inf = (1-u)(uq;q)_inf; the
/// t-dependent arguments of the remaining four change nonlinearly in k and
/// go through the power-sum log evaluation instead.
class QBetaKernel {
 public:
    QBetaKernel(double beta, double a, double c, Base base)
        : base_(base), q_(base.q), qb_(std::pow(base.q, beta)), a_(a), c_(c),
          q2b1_(std::pow(base.q, 2.0 * beta + 1.0)), qb1_(std::pow(base.q, beta + 1.0)) {
        lg_qt_ = log_qpoch_infinite(q_, base_).log_abs;       // (q^{k+1};q)_inf at k = 0
        lg_qbt_ = log_qpoch_infinite(qb_, base_).log_abs;     // (q^{beta+k};q)_inf at k = 0
        next_k_ = 0;
    }

    /// log of the kernel at t = q^k plus the prefactor ratios; must be
    /// called with k = 0, 1, 2, ... in order.
    double eval(long k, double t, int* sign_out) {
        advance_to(k);
        const double w = a_ + qb_ * t;
        const double D = c_ - a_ * w;
        screen(D, c_, k, "c - a(a + q^beta t)");
        const LogValue l1 = log_qpoch_infinite(w / D, base_);
        const LogValue l2 = log_qpoch_infinite(w * q2b1_ * t / D, base_);
        const LogValue l3 = log_qpoch_infinite(w * t / D, base_);
        const LogValue l4 = log_qpoch_infinite(w * qb1_ / D, base_);
        if (l3.sign == 0 || l4.sign == 0)
            throw DomainError("q-beta kernel: vanishing denominator product at k=" + std::to_string(k));
        *sign_out = l1.sign * l2.sign * l3.sign * l4.sign;
        return lg_qt_ + l1.log_abs + l2.log_abs - lg_qbt_ - l3.log_abs - l4.log_abs;
    }

    double prefactor_ratios(long k, double t) const {
        const double w = a_ + qb_ * t;
        const double d1 = c_ - (a_ + 1.0) * w;
        const double d2 = c_ - (a_ + qb_) * w;
        screen(d1, c_, k, "c - (a+1)(a + q^beta t)");
        screen(d2, c_, k, "c - (a+q^beta)(a + q^beta t)");
        return (c_ - (a_ + 1.0) * (a_ + qb_)) / d1 * (c_ - w * w) / d2;
    }

    double w(double t) const { return a_ + qb_ * t; }
    double D(double t) const { return c_ - a_ * w(t); }
    double qb() const { return qb_; }
    double q2b1() const { return q2b1_; }

 private:
    static void screen(double v, double scale, long k, const char* what) {
        if (std::fabs(v) < 1e-6 * std::max(1.0, std::fabs(scale)))
            throw DomainError(std::string("near-pole in ") + what + " at k=" + std::to_string(k));
    }

    void advance_to(long k) {
        while (next_k_ < k) {
            const double qk1 = std::pow(q_, static_cast<double>(next_k_ + 1));
            lg_qt_ -= std::log1p(-qk1);                 // to (q^{k+2};q)_inf
            lg_qbt_ -= std::log1p(-qb_ * std::pow(q_, static_cast<double>(next_k_)));
            ++next_k_;
        }
    }

    Base base_;
    double q_, qb_, a_, c_, q2b1_, qb1_;
    double lg_qt_ = 0.0, lg_qbt_ = 0.0;
    long next_k_ = 0;
};

inline TruncationPolicy scaled_for_q(const TruncationPolicy& policy, double q) {
    // the q-grid needs O(1/(1-q)) points; widen the budget accordingly
    const long needed = static_cast<long>(80.0 / (1.0 - q)) + 1000;
    return policy.max_terms >= needed ? policy : policy.with_max_terms(needed);
}

}  // namespace detail

/// q-extension of the beta integral: the q-integral of
/// (qt;q)_inf / (q^beta t;q)_inf t^{alpha-1} against
/// Gamma_q(alpha) Gamma_q(beta) / Gamma_q(alpha+beta).
inline CheckResult check_q_beta(double alpha, double beta, Base base,
                                const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-10) {
    if (!(alpha > 0.0 && beta > 0.0)) return skipped_pole_result("check_q_beta needs alpha, beta > 0");
    try {
        const TruncationPolicy pol = detail::scaled_for_q(policy, base.q);
        const double q = base.q, qb = std::pow(q, beta);
        double lg_qt = log_qpoch_infinite(q, base).log_abs;
        double lg_qbt = log_qpoch_infinite(qb, base).log_abs;
        const double lnq = std::log(q);
        long next_k = 0;
        auto f = [&](long k, double) {
            while (next_k < k) {
                lg_qt -= std::log1p(-std::pow(q, static_cast<double>(next_k + 1)));
                lg_qbt -= std::log1p(-qb * std::pow(q, static_cast<double>(next_k)));
                ++next_k;
            }
            return std::exp(lg_qt - lg_qbt + (alpha - 1.0) * k * lnq);
        };
        const QIntegralValue I = detail::q_integrate_indexed(f, base, pol);
        return make_check(I.value, qgamma_beta_ratio(alpha, beta, base), tol, I.terms_used);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Generalized q-beta evaluation: the integrand carries the quadratic
/// prefactor ratios, an inner 2phi1, and the six-product kernel; equals
/// Gamma_q(alpha) Gamma_q(beta) / Gamma_q(alpha+beta).
inline CheckResult check_qbetat(const QBetaParams& p, Base base,
                                const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    if (!(p.alpha > 0.0 && p.beta > 0.0)) return skipped_pole_result("check_qbetat needs alpha, beta > 0");
    try {
        const TruncationPolicy pol = detail::scaled_for_q(policy, base.q);
        detail::QBetaKernel kernel(p.beta, p.a, p.c, base);
        const double q = base.q, lnq = std::log(q);
        const double num1 = std::pow(q, p.alpha - p.beta - 1.0);
        const double num2 = std::pow(q, -p.beta);
        const double den1 = std::pow(q, p.alpha);
        long inner_terms = 0;
        auto f = [&](long k, double t) {
            int sign = 0;
            const double lg = kernel.eval(k, t, &sign);
            const double ratios = kernel.prefactor_ratios(k, t);
            const double inner_arg = kernel.w(t) * kernel.q2b1() * t / kernel.D(t);
            if (!(std::fabs(inner_arg) < 1.0))
                throw DivergenceError("inner 2phi1 argument outside unit disc at k=" + std::to_string(k));
            const auto inner = eval_series_ex(detail::qspec({num1, num2}, {den1}, q, inner_arg), kInnerPolicy);
            inner_terms += inner.terms_used;
            return ratios * inner.value * sign * std::exp(lg + (p.alpha - 1.0) * k * lnq);
        };
        const QIntegralValue I = detail::q_integrate_indexed(f, base, pol);
        return make_check(I.value, qgamma_beta_ratio(p.alpha, p.beta, base), tol, I.terms_used + inner_terms);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return diverged_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// q-beta-type evaluation with an inner terminating 3phi2 and the
/// (e q^m;q)_inf/(e;q)_inf (et;q)_inf/(e q^m t;q)_inf weight; equals
/// Gamma_q(beta+1) Gamma_q(beta) / Gamma_q(2 beta + 1).
inline CheckResult check_qbetat2(const QBetaParams& p, Base base,
                                 const TruncationPolicy& policy = kDefaultPolicy, double tol = 1e-8) {
    if (!(p.beta > 0.0 && p.m >= 0)) return skipped_pole_result("check_qbetat2 needs beta > 0, m >= 0");
    try {
        const TruncationPolicy pol = detail::scaled_for_q(policy, base.q);
        detail::QBetaKernel kernel(p.beta, p.a, p.c, base);
        const double q = base.q, lnq = std::log(q);
        const double qm = std::pow(q, static_cast<double>(p.m));
        const double num1 = std::pow(q, -p.beta);
        const double num3 = std::pow(q, static_cast<double>(-p.m));
        const double den1 = std::pow(q, -2.0 * p.beta);
        // constant weight (e q^m;q)_inf / (e;q)_inf
        const LogValue lw_num = log_qpoch_infinite(p.e * qm, base);
        const LogValue lw_den = log_qpoch_infinite(p.e, base);
        if (lw_den.sign == 0) throw DomainError("check_qbetat2: (e;q)_inf vanishes");
        const double const_weight = lw_num.value() / lw_den.value();
        // grid weight (e q^k;q)_inf / (e q^{m+k};q)_inf, updated one factor at
        // a time along the grid
        double lg_et = lw_den.log_abs;
        double lg_eqmt = lw_num.log_abs;
        int sign_et = lw_den.sign * lw_num.sign;
        long next_k = 0;
        long inner_terms = 0;
        auto f = [&](long k, double t) {
            while (next_k < k) {
                const double f1 = 1.0 - p.e * std::pow(q, static_cast<double>(next_k));
                const double f2 = 1.0 - p.e * qm * std::pow(q, static_cast<double>(next_k));
                if (f1 == 0.0 || f2 == 0.0)
                    throw DomainError("check_qbetat2: e weight factor vanishes at k=" + std::to_string(next_k));
                if (f1 < 0.0) sign_et = -sign_et;
                if (f2 < 0.0) sign_et = -sign_et;
                lg_et -= std::log(std::fabs(f1));
                lg_eqmt -= std::log(std::fabs(f2));
                ++next_k;
            }
            int sign = 0;
            const double lg = kernel.eval(k, t, &sign);
            const double ratios = kernel.prefactor_ratios(k, t);
            const double inner_arg2 = kernel.w(t) * t / kernel.D(t);
            const auto inner = eval_series_ex(
                detail::qspec({num1, inner_arg2, num3}, {den1, p.e * t}, q, q), kInnerPolicy);
            inner_terms += inner.terms_used;
            return ratios * inner.value * const_weight * sign * sign_et *
                   std::exp(lg + lg_et - lg_eqmt + (p.beta - p.m) * k * lnq);
        };
        const QIntegralValue I = detail::q_integrate_indexed(f, base, pol);
        return make_check(I.value, qgamma_beta_ratio(p.beta + 1.0, p.beta, base), tol,
                          I.terms_used + inner_terms);
    } catch (const DomainError& e2) {
        return skipped_pole_result(e2.what());
    } catch (const DivergenceError& e2) {
        return diverged_result(e2.what());
    } catch (const TruncationError& e2) {
        return diverged_result(e2.what());
    }
}

enum class QLimitKind { q_beta, qbetat };

struct QLimitResult {
    double q = 0.0;
    double I_q = 0.0;
    double I_classical = 0.0;
    double deviation = 0.0;
};

/// Evaluates the selected q-integral along a schedule of bases approaching 1
/// and reports |I_q - I_classical| against the classical quadrature value.
/// The deviations must decrease as q -> 1.
inline std::vector<QLimitResult> q_limit_probe(QLimitKind kind, const QBetaParams& p,
                                               const std::vector<double>& q_schedule = {0.9, 0.99, 0.999},
                                               const TruncationPolicy& policy = kDefaultPolicy) {
    BetaFamilyParams cp;
    cp.alpha = p.alpha;
    cp.beta = p.beta;
    cp.a = p.a;
    cp.c = p.c;
    const BetaFamilyCase classical = make_beta_family_case(
        kind == QLimitKind::q_beta ? IntegralId::BETAF_1_1 : IntegralId::BETAT_5_1, cp);
    const double I_classical = classical.prefactor * integrate01(classical.integrand, 1e-11).value;

    std::vector<QLimitResult> out;
    for (double qv : q_schedule) {
        const Base base{qv};
        const CheckResult r = kind == QLimitKind::q_beta
                                  ? check_q_beta(p.alpha, p.beta, base, policy, 1e-6)
                                  : check_qbetat(p, base, policy, 1e-6);
        if (r.status == CheckStatus::skipped_pole || r.status == CheckStatus::diverged)
            throw DomainError("q_limit_probe: q-integral not evaluable at q=" + std::to_string(qv) +
                              " (" + r.note + ")");
        QLimitResult lr;
        lr.q = qv;
        lr.I_q = r.lhs;
        lr.I_classical = I_classical;
        lr.deviation = std::fabs(r.lhs - I_classical);
        out.push_back(lr);
    }
    return out;
}

}  // namespace qsv
