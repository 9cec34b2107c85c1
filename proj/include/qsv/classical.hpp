#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qsv/check_result.hpp"
#include "qsv/qcore.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

/// Gamma function, Lanczos approximation (g = 7, 9 coefficients) with the
/// reflection formula for x < 0.5. Relative accuracy is a few 1e-14 on the
/// ranges used here.
inline double gamma_fn(double x) {
    static constexpr double kCoeff[9] = {
        0.99999999999980993,   676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    const double nearest = std::round(x);
    if (nearest <= 0.0 && std::fabs(x - nearest) < 1e-13)
        throw DomainError("gamma_fn: pole at nonpositive integer");
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = kCoeff[0];
    for (int i = 1; i < 9; ++i) acc += kCoeff[i] / (z + i);
    const double t = z + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

/// prod Gamma(numerator args) / prod Gamma(denominator args).
inline double gamma_ratio(const std::vector<double>& numerator_args,
                          const std::vector<double>& denominator_args) {
    double r = 1.0;
    for (double x : numerator_args) r *= gamma_fn(x);
    for (double x : denominator_args) r /= gamma_fn(x);
    return r;
}

/// (a)_k = a (a+1) ... (a+k-1).
inline double rising_factorial(double a, long k) {
    double r = 1.0;
    for (long j = 0; j < k; ++j) r *= (a + j);
    return r;
}

/// Ordinary hypergeometric series sum_k prod (a_i)_k / (k! prod (b_j)_k) z^k,
/// with the same truncation contract as eval_series. Terminating when a
/// numerator parameter is a nonpositive integer within 1e-12; nonterminating
/// series require |z| < 1, or z = 1 with sum(b) - sum(a) > 0, in which case
/// the power-law tail is estimated by Euler-Maclaurin and added.
inline SeriesValue eval_hyper_ex(const SeriesSpec& spec, const TruncationPolicy& policy = kDefaultPolicy) {
    if (spec.kind != SeriesKind::ordinary_hypergeometric)
        throw std::invalid_argument("eval_hyper: expected ordinary kind");
    policy.validate();
    const double z = spec.argument;

    long stop_at = -1;
    for (double p : spec.numerator_params) {
        const long n = detail::terminating_index_ordinary(p, policy.max_terms);
        if (n >= 0 && (stop_at < 0 || n < stop_at)) stop_at = n;
    }

    bool at_unit = false;
    double balance = 0.0;  // sum(b) - sum(a); tail exponent control at z = 1
    if (stop_at < 0 && !(std::fabs(z) < 1.0)) {
        for (double b : spec.denominator_params) balance += b;
        for (double a : spec.numerator_params) balance -= a;
        if (z == 1.0 && balance > 0.05) {
            at_unit = true;
        } else {
            throw DivergenceError("eval_hyper: nonterminating with |z| >= 1");
        }
    }

    const long budget = at_unit ? std::max<long>(policy.max_terms, 400000) : policy.max_terms;
    KahanAccumulator sum;
    double term = 1.0;
    double peak = 1.0;
    int small_run = 0;
    long k = 0;
    for (;; ++k) {
        sum.add(term);
        peak = std::max(peak, std::fabs(term));
        if (stop_at >= 0 && k == stop_at) { ++k; break; }
        if (k + 1 >= budget) {
            if (stop_at >= 0) { ++k; break; }
            if (at_unit) { ++k; break; }
            throw TruncationError("eval_hyper: max_terms exceeded", sum.value(), k + 1);
        }
        double factor = z;
        for (double a : spec.numerator_params) factor *= (a + k);
        factor /= (k + 1.0);
        for (double b : spec.denominator_params) {
            const double f = b + k;
            if (f == 0.0)
                throw DomainError("eval_hyper: denominator parameter is a nonpositive integer");
            factor /= f;
        }
        term *= factor;
        if (stop_at < 0) {
            const double floor = at_unit ? 1e-13 * std::fabs(sum.value())
                                         : std::max(policy.abs_floor, policy.rel_floor * std::fabs(sum.value()));
            if (std::fabs(term) < floor) {
                if (++small_run >= policy.consecutive_small) { ++k; break; }
            } else {
                small_run = 0;
            }
        }
    }
    double value = sum.value();
    if (at_unit && stop_at < 0) {
        // t_j ~ C j^{E} with E = -1 - balance; tail = sum_{j>=k} t_j.
        const double K = static_cast<double>(k);
        const double E = -1.0 - balance;
        value += term * (K / balance + 0.5 - E / (12.0 * K));
    }
    return SeriesValue{value, k, peak};
}

inline double eval_hyper(const SeriesSpec& spec, const TruncationPolicy& policy = kDefaultPolicy) {
    return eval_hyper_ex(spec, policy).value;
}

/// Gauss 2F1(a,b;c;x).
inline double hyp2f1(double a, double b, double c, double x,
                     const TruncationPolicy& policy = kInnerPolicy) {
    SeriesSpec s;
    s.kind = SeriesKind::ordinary_hypergeometric;
    s.numerator_params = {a, b};
    s.denominator_params = {c};
    s.argument = x;
    return eval_hyper(s, policy);
}

/// Gamma(2b) = pi^{-1/2} 2^{2b-1} Gamma(b) Gamma(b+1/2), together with the
/// rearranged form Gamma(b)^2 / (2 Gamma(2b)) = sqrt(pi) 4^{-b} Gamma(b)/Gamma(b+1/2).
inline CheckResult legendre_duplication_check(double beta, double tol = 1e-12) {
    try {
        const double lhs = gamma_fn(2.0 * beta);
        const double rhs = std::pow(2.0, 2.0 * beta - 1.0) / std::sqrt(std::numbers::pi) *
                           gamma_fn(beta) * gamma_fn(beta + 0.5);
        CheckResult r = make_check(lhs, rhs, tol);
        const double lhs2 = gamma_fn(beta) * gamma_fn(beta) / (2.0 * gamma_fn(2.0 * beta));
        const double rhs2 = std::sqrt(std::numbers::pi) * std::pow(4.0, -beta) *
                            gamma_fn(beta) / gamma_fn(beta + 0.5);
        const double rel2 = std::fabs(lhs2 - rhs2) / std::max({std::fabs(lhs2), std::fabs(rhs2), 1e-300});
        if (rel2 > tol) {
            r.status = CheckStatus::fail;
            r.note = "rearranged form deviates";
        }
        return r;
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    }
}

/// Pfaff: 2F1(-m,b;c;x) = ((c-b)_m/(c)_m) 2F1(-m,b;b+1-m-c;1-x), both sides
/// terminating.
inline CheckResult pfaff_transform_check(int m, double b, double c, double x, double tol = 1e-12) {
    try {
        const double lhs = hyp2f1(-static_cast<double>(m), b, c, x);
        const double pref = rising_factorial(c - b, m) / rising_factorial(c, m);
        const double rhs = pref * hyp2f1(-static_cast<double>(m), b, b + 1.0 - m - c, 1.0 - x);
        return make_check(lhs, rhs, tol, m + 1);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    }
}

}  // namespace qsv
