#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string_view>
#include <vector>

#include "qsv/check_result.hpp"
#include "qsv/classical.hpp"
#include "qsv/kahan.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = std::numeric_limits<double>::infinity();
    int levels = 0;
    bool converged = false;
};

namespace detail {

/// Tanh-sinh rule on (0,1). The integrand receives t and 1-t separately so
/// that algebraic endpoint factors keep full precision on both ends; the
/// double-exponential node clustering absorbs t^{p0} (1-t)^{p1} behavior for
/// any p0, p1 > -1. Levels halve h and reuse previous nodes; refinement
/// stops once two successive levels agree within tol (relative).
inline QuadratureResult tanh_sinh_01(const std::function<double(double, double)>& f, double tol,
                                     int max_refinement) {
    constexpr double kUMax = 6.0;
    auto node = [&f](double u) -> double {
        const double x = std::numbers::pi * std::sinh(u);
        const double t = 1.0 / (1.0 + std::exp(-x));
        const double omt = 1.0 / (1.0 + std::exp(x));
        const double w = std::numbers::pi * std::cosh(u) * t * omt;
        if (w == 0.0 || t == 0.0 || omt == 0.0) return 0.0;
        const double v = f(t, omt);
        if (!std::isfinite(v)) return 0.0;  // endpoint rounding underflow guard
        return w * v;
    };

    double h = 1.0;
    KahanAccumulator acc;
    acc.add(node(0.0));
    for (long j = 1; static_cast<double>(j) * h <= kUMax; ++j) {
        acc.add(node(j * h));
        acc.add(node(-j * h));
    }
    QuadratureResult res;
    double prev = acc.value() * h;
    res.value = prev;
    for (int level = 1; level <= max_refinement; ++level) {
        h *= 0.5;
        for (long j = 1; static_cast<double>(j) * h <= kUMax; j += 2) {
            acc.add(node(j * h));
            acc.add(node(-j * h));
        }
        res.value = acc.value() * h;
        res.error_estimate = std::fabs(res.value - prev);
        res.levels = level;
        if (level >= 3 && res.error_estimate <= tol * std::max(std::fabs(res.value), 1e-300)) {
            res.converged = true;
            break;
        }
        prev = res.value;
    }
    return res;
}

}  // namespace detail

/// Integrand on (0,1) with algebraic endpoint behavior t^{p0} (1-t)^{p1},
/// p0, p1 > -1, and a relative agreement target between refinement levels.
struct QuadratureRequest {
    std::function<double(double)> integrand;
    double p0 = 0.0;
    double p1 = 0.0;
    double tol = 1e-9;
    int max_refinement = 10;
};

inline QuadratureResult integrate(const QuadratureRequest& req) {
    if (!(req.p0 > -1.0 && req.p1 > -1.0))
        throw std::invalid_argument("integrate: endpoint exponents must exceed -1");
    auto f2 = [&req](double t, double) { return req.integrand(t); };
    QuadratureResult r = detail::tanh_sinh_01(f2, req.tol, req.max_refinement);
    if (!r.converged)
        throw TruncationError("integrate: refinement limit reached", r.value, r.levels);
    return r;
}

/// Two-argument entry point used by the identity checks; f(t, 1-t).
inline QuadratureResult integrate01(const std::function<double(double, double)>& f, double tol = 1e-10,
                                    int max_refinement = 10) {
    QuadratureResult r = detail::tanh_sinh_01(f, tol, max_refinement);
    if (!r.converged)
        throw TruncationError("integrate01: refinement limit reached", r.value, r.levels);
    return r;
}

/// Same integral evaluated through the half-line substitution t -> s/(s+1),
/// s in [0,inf), mapped back to (0,1) by the standard s -> (1-u)/u change of
/// variable. The composition reflects the integrand (t = 1-u), so the two
/// routes place their nodes against opposite endpoints.
inline QuadratureResult integrate01_halfline(const std::function<double(double, double)>& f,
                                             double tol = 1e-10, int max_refinement = 10) {
    auto reflected = [&f](double u, double omu) { return f(omu, u); };
    QuadratureResult r = detail::tanh_sinh_01(reflected, tol, max_refinement);
    if (!r.converged)
        throw TruncationError("integrate01_halfline: refinement limit reached", r.value, r.levels);
    return r;
}

enum class IntegralId {
    BETAF_1_1,
    SPEC2_1_2,
    SPEC3_1_3,
    BETAT_5_1,
    SPEC1_5_2,
    ERDELYI_5_4,
    SPEC5_5_5,
    BETAT2_5_6,
    SPEC4_5_7,
};

inline std::string_view to_string(IntegralId id) {
    switch (id) {
        case IntegralId::BETAF_1_1: return "BETAF_1_1";
        case IntegralId::SPEC2_1_2: return "SPEC2_1_2";
        case IntegralId::SPEC3_1_3: return "SPEC3_1_3";
        case IntegralId::BETAT_5_1: return "BETAT_5_1";
        case IntegralId::SPEC1_5_2: return "SPEC1_5_2";
        case IntegralId::ERDELYI_5_4: return "ERDELYI_5_4";
        case IntegralId::SPEC5_5_5: return "SPEC5_5_5";
        case IntegralId::BETAT2_5_6: return "BETAT2_5_6";
        case IntegralId::SPEC4_5_7: return "SPEC4_5_7";
    }
    return "UNKNOWN";
}

/// Parameters of the beta-type integral family.
struct BetaFamilyParams {
    double alpha = 1.0;
    double beta = 1.0;
    double a = 0.0;
    double c = 0.0;
    double e = 0.0;
    int m = 0;
};

namespace detail {

/// 2F1 factor inside an integrand. Terminating cases are expanded once into
/// polynomial coefficients; nonterminating cases are evaluated per node and
/// require |x| <= 0.95.
class Hyp2F1Factor {
 public:
    Hyp2F1Factor(double a, double b, double c) : a_(a), b_(b), c_(c) {
        long n = -1;
        const long na = terminating_index_ordinary(a, 400);
        const long nb = terminating_index_ordinary(b, 400);
        if (na >= 0) n = na;
        if (nb >= 0 && (n < 0 || nb < n)) n = nb;
        if (n >= 0) {
            coeffs_.resize(n + 1);
            double ck = 1.0;
            for (long k = 0; k <= n; ++k) {
                coeffs_[k] = ck;
                ck *= (a + k) * (b + k) / ((k + 1.0) * (c + k));
            }
        }
    }

    double operator()(double x) const {
        if (!coeffs_.empty()) {
            double v = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
            return v;
        }
        if (!(std::fabs(x) <= 0.95))
            throw DivergenceError("2F1 argument outside the admissible disc");
        return hyp2f1(a_, b_, c_, x);
    }

 private:
    double a_, b_, c_;
    std::vector<double> coeffs_;
};

inline void screen_positive(double v, double scale, const char* what) {
    if (!(v >= 1e-3 * std::max(1.0, std::fabs(scale))))
        throw DomainError(std::string("quadrature screen: ") + what);
}

}  // namespace detail

/// Builds the integrand f(t, 1-t) for the given member of the beta-type
/// family (everything except the fractional-integral identity, which has its
/// own parameter set), along with the constant prefactor and the Gamma-ratio
/// closed form it must reproduce.
struct BetaFamilyCase {
    std::function<double(double, double)> integrand;
    double prefactor = 1.0;
    double closed_form = 0.0;
    double p0 = 0.0, p1 = 0.0;  // endpoint exponents
};

inline BetaFamilyCase make_beta_family_case(IntegralId id, const BetaFamilyParams& p) {
    const double alpha = p.alpha, beta = p.beta, a = p.a, c = p.c, e = p.e;
    const int m = p.m;
    BetaFamilyCase out;
    switch (id) {
        case IntegralId::BETAF_1_1: {
            if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("beta integral needs alpha, beta > 0");
            out.integrand = [alpha, beta](double t, double omt) {
                return std::pow(t, alpha - 1.0) * std::pow(omt, beta - 1.0);
            };
            out.closed_form = gamma_ratio({alpha, beta}, {alpha + beta});
            out.p0 = alpha - 1.0;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::SPEC2_1_2: {
            if (!(beta > 0.0)) throw DomainError("SPEC2_1_2 needs beta > 0");
            detail::screen_positive(c - (a + 1.0) * (a + 1.0), c, "c - (a+1)^2 must stay positive");
            out.integrand = [beta, a, c](double t, double omt) {
                const double w = a + t;
                return std::pow(c - a * w, beta) * std::pow(c - (a + 1.0) * w, beta - 1.0) /
                       std::pow(c - w * w, 2.0 * beta) * std::pow(t, beta) * std::pow(omt, beta - 1.0);
            };
            out.prefactor = c - (a + 1.0) * (a + 1.0);
            out.closed_form = gamma_ratio({beta, beta}, {2.0 * beta}) / 2.0;
            out.p0 = beta;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::SPEC3_1_3: {
            if (!(beta > 0.0)) throw DomainError("SPEC3_1_3 needs beta > 0");
            detail::screen_positive(c - (a + 1.0) * (a + 1.0), c, "c - (a+1)^2 must stay positive");
            out.integrand = [beta, a, c](double t, double omt) {
                const double w = a + t;
                return std::pow(c - a * w, beta - 1.0) * std::pow(c - (a + 1.0) * w, beta - 1.0) /
                       std::pow(c - w * w, 2.0 * beta) * (c - (a - t) * w) * std::pow(t, beta - 1.0) *
                       std::pow(omt, beta - 1.0);
            };
            out.prefactor = c - (a + 1.0) * (a + 1.0);
            out.closed_form = gamma_ratio({beta, beta}, {2.0 * beta});
            out.p0 = beta - 1.0;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::BETAT_5_1: {
            if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("BETAT_5_1 needs alpha, beta > 0");
            detail::screen_positive(c - (a + 1.0) * (a + 1.0), c, "c - (a+1)^2 must stay positive");
            auto f21 = std::make_shared<detail::Hyp2F1Factor>(alpha - beta - 1.0, -beta, alpha);
            out.integrand = [alpha, beta, a, c, f21](double t, double omt) {
                const double w = a + t;
                const double D = c - a * w;
                return std::pow(D, beta) * std::pow(c - (a + 1.0) * w, beta - 1.0) /
                       std::pow(c - w * w, 2.0 * beta) * (*f21)(w * t / D) * std::pow(t, alpha - 1.0) *
                       std::pow(omt, beta - 1.0);
            };
            out.prefactor = c - (a + 1.0) * (a + 1.0);
            out.closed_form = gamma_ratio({alpha, beta}, {alpha + beta});
            out.p0 = alpha - 1.0;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::SPEC1_5_2: {
            if (!(alpha > 0.0 && beta > 0.0 && a > 0.0)) throw DomainError("SPEC1_5_2 needs alpha, beta, a > 0");
            auto f21 = std::make_shared<detail::Hyp2F1Factor>(alpha - beta - 1.0, -beta, alpha);
            out.integrand = [alpha, beta, a, f21](double t, double omt) {
                return std::pow(t, alpha - 1.0) * std::pow(omt, beta - 1.0) /
                       std::pow(a + t, 2.0 * beta + 1.0) * (*f21)(-t / a);
            };
            out.prefactor = std::pow(a, beta) * std::pow(a + 1.0, beta + 1.0);
            out.closed_form = gamma_ratio({alpha, beta}, {alpha + beta});
            out.p0 = alpha - 1.0;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::SPEC5_5_5: {
            if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("SPEC5_5_5 needs alpha, beta > 0");
            detail::screen_positive(c - 1.0, c, "c - 1 must stay positive");
            auto f21 = std::make_shared<detail::Hyp2F1Factor>(alpha - beta - 1.0, -beta, alpha);
            out.integrand = [alpha, beta, c, f21](double t, double omt) {
                return std::pow(c - t, beta - 1.0) / std::pow(c - t * t, 2.0 * beta) *
                       std::pow(t, alpha - 1.0) * std::pow(omt, beta - 1.0) * (*f21)(t * t / c);
            };
            out.prefactor = (c - 1.0) * std::pow(c, beta);
            out.closed_form = gamma_ratio({alpha, beta}, {alpha + beta});
            out.p0 = alpha - 1.0;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::BETAT2_5_6: {
            if (!(beta > std::max(0.0, m - 1.0))) throw DomainError("BETAT2_5_6 needs beta > max(0, m-1)");
            detail::screen_positive(c - (a + 1.0) * (a + 1.0), c, "c - (a+1)^2 must stay positive");
            detail::screen_positive(1.0 - std::fabs(e), 1.0, "1 - et must stay away from zero on [0,1]");
            for (int j = 0; j < m; ++j)
                detail::screen_positive(std::fabs(2.0 * beta - j), 1.0, "(-2 beta)_k pole screen");
            auto f21 = std::make_shared<detail::Hyp2F1Factor>(-beta, -static_cast<double>(m), -2.0 * beta);
            out.integrand = [beta, a, c, e, m, f21](double t, double omt) {
                const double w = a + t;
                const double D = c - a * w;
                const double oet = 1.0 - e * t;
                return std::pow(D, beta) * std::pow(c - (a + 1.0) * w, beta - 1.0) /
                       std::pow(c - w * w, 2.0 * beta) * (*f21)((c - w * w) / (D * oet)) *
                       std::pow(oet / (1.0 - e), static_cast<double>(m)) * std::pow(t, beta - m) *
                       std::pow(omt, beta - 1.0);
            };
            out.prefactor = c - (a + 1.0) * (a + 1.0);
            out.closed_form = gamma_ratio({beta, beta}, {2.0 * beta}) / 2.0;
            out.p0 = beta - m;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::SPEC4_5_7: {
            if (!(beta > std::max(0.0, m - 1.0))) throw DomainError("SPEC4_5_7 needs beta > max(0, m-1)");
            detail::screen_positive(1.0 - std::fabs(e), 1.0, "1 - et must stay away from zero on [0,1]");
            for (int j = 0; j < m; ++j)
                detail::screen_positive(std::fabs(2.0 * beta - j), 1.0, "(-2 beta)_k pole screen");
            auto f21 = std::make_shared<detail::Hyp2F1Factor>(-beta, -static_cast<double>(m), -2.0 * beta);
            out.integrand = [beta, e, m, f21](double t, double omt) {
                const double oet = 1.0 - e * t;
                return (*f21)(1.0 / oet) * std::pow(oet / (1.0 - e), static_cast<double>(m)) *
                       std::pow(t, beta - m) * std::pow(omt, beta - 1.0);
            };
            out.closed_form = gamma_ratio({beta, beta}, {2.0 * beta}) / 2.0;
            out.p0 = beta - m;
            out.p1 = beta - 1.0;
            return out;
        }
        case IntegralId::ERDELYI_5_4:
            throw std::invalid_argument("ERDELYI_5_4 has its own parameter set; use check_erdelyi");
    }
    throw std::invalid_argument("make_beta_family_case: unknown selector");
}

namespace detail {

inline CheckResult run_beta_family(IntegralId id, const BetaFamilyParams& p, double tol) {
    try {
        const BetaFamilyCase cs = make_beta_family_case(id, p);
        const QuadratureResult quad = integrate01(cs.integrand, std::min(1e-10, tol / 30.0));
        return make_check(cs.prefactor * quad.value, cs.closed_form, tol, quad.levels);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return skipped_pole_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

}  // namespace detail

/// Euler's beta integral against Gamma(alpha)Gamma(beta)/Gamma(alpha+beta).
inline CheckResult check_beta(double alpha, double beta, double tol = 1e-9) {
    BetaFamilyParams p;
    p.alpha = alpha;
    p.beta = beta;
    return detail::run_beta_family(IntegralId::BETAF_1_1, p, tol);
}

/// The generalized beta evaluation with quadratic factors and a 2F1 kernel.
inline CheckResult check_betat(const BetaFamilyParams& p, double tol = 1e-7) {
    return detail::run_beta_family(IntegralId::BETAT_5_1, p, tol);
}

inline CheckResult check_spec2(double beta, double a, double c, double tol = 1e-7) {
    BetaFamilyParams p;
    p.beta = beta;
    p.a = a;
    p.c = c;
    return detail::run_beta_family(IntegralId::SPEC2_1_2, p, tol);
}

inline CheckResult check_spec3(double beta, double a, double c, double tol = 1e-7) {
    BetaFamilyParams p;
    p.beta = beta;
    p.a = a;
    p.c = c;
    return detail::run_beta_family(IntegralId::SPEC3_1_3, p, tol);
}

inline CheckResult check_spec1(double alpha, double beta, double a, double tol = 1e-7) {
    BetaFamilyParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.a = a;
    return detail::run_beta_family(IntegralId::SPEC1_5_2, p, tol);
}

inline CheckResult check_spec5(double alpha, double beta, double c, double tol = 1e-7) {
    BetaFamilyParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.c = c;
    return detail::run_beta_family(IntegralId::SPEC5_5_5, p, tol);
}

inline CheckResult check_betat2(const BetaFamilyParams& p, double tol = 1e-7) {
    return detail::run_beta_family(IntegralId::BETAT2_5_6, p, tol);
}

inline CheckResult check_spec4(double beta, int m, double e, double tol = 1e-7) {
    BetaFamilyParams p;
    p.beta = beta;
    p.m = m;
    p.e = e;
    return detail::run_beta_family(IntegralId::SPEC4_5_7, p, tol);
}

/// The fractional-integral representation of 2F1(a,b;c;x): the left side is
/// the series itself, the right side a Gamma-ratio times an integral whose
/// kernel carries two further 2F1 factors.
inline CheckResult check_erdelyi(double a, double b, double c, double mu, double lambda, double x,
                                 double tol = 1e-7) {
    try {
        if (!(mu > 0.0 && c - mu > 0.0)) throw DomainError("check_erdelyi needs c > mu > 0");
        if (!(std::fabs(x) <= 0.95)) throw DomainError("check_erdelyi needs |x| <= 0.95");
        const double lhs = hyp2f1(a, b, c, x);
        auto inner1 = std::make_shared<detail::Hyp2F1Factor>(lambda - a, lambda - b, mu);
        auto inner2 = std::make_shared<detail::Hyp2F1Factor>(a + b - lambda, lambda - mu, c - mu);
        auto f = [a, b, c, mu, lambda, x, inner1, inner2](double t, double omt) {
            const double oxt = 1.0 - x * t;
            return std::pow(t, mu - 1.0) * std::pow(omt, c - mu - 1.0) *
                   std::pow(oxt, lambda - a - b) * (*inner1)(x * t) * (*inner2)(omt * x / oxt);
        };
        const QuadratureResult quad = integrate01(f, std::min(1e-10, tol / 30.0));
        const double rhs = gamma_ratio({c}, {mu, c - mu}) * quad.value;
        return make_check(lhs, rhs, tol, quad.levels);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return skipped_pole_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

/// Re-evaluates a beta-family integral through the half-line route and
/// compares with the direct evaluation.
inline CheckResult halfline_transform_check(IntegralId id, const BetaFamilyParams& p, double tol = 1e-6) {
    try {
        const BetaFamilyCase cs = make_beta_family_case(id, p);
        const QuadratureResult direct = integrate01(cs.integrand, std::min(1e-10, tol / 30.0));
        const QuadratureResult transformed = integrate01_halfline(cs.integrand, std::min(1e-10, tol / 30.0));
        return make_check(cs.prefactor * direct.value, cs.prefactor * transformed.value, tol,
                          direct.levels + transformed.levels);
    } catch (const DomainError& e) {
        return skipped_pole_result(e.what());
    } catch (const DivergenceError& e) {
        return skipped_pole_result(e.what());
    } catch (const TruncationError& e) {
        return diverged_result(e.what());
    }
}

}  // namespace qsv
