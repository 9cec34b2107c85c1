#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qsv/check_result.hpp"
#include "qsv/identities.hpp"
#include "qsv/qintegral.hpp"
#include "qsv/quadrature.hpp"
#include "qsv/sampler.hpp"
#include "qsv/truncation.hpp"

namespace qsv {

using ParamMap = std::vector<std::pair<std::string, double>>;

/// One registered verification suite: a stable id, a one-line description,
/// whether it sweeps the q grid, its default tolerance, and a runner that
/// draws the index-th admissible sample and checks it.
struct RegistryEntry {
    std::string id;
    std::string description;
    bool uses_q = true;
    double default_tol = 1e-8;
    std::function<std::pair<ParamMap, CheckResult>(std::uint64_t seed, std::uint64_t index, double q,
                                                   double tol, const TruncationPolicy& policy)>
        run;
};

namespace detail {

/// Rejection-samples until the check reports an evaluable point (near-pole
/// and constraint skips are resampled; failures and divergences are real
/// outcomes and returned as-is).
template <typename Draw>
std::pair<ParamMap, CheckResult> sample_admissible(Draw&& draw, int max_attempts = 400) {
    std::pair<ParamMap, CheckResult> out;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        out = draw();
        if (out.second.status != CheckStatus::skipped_pole) return out;
    }
    out.second.note = "no admissible sample found: " + out.second.note;
    return out;
}

}  // namespace detail

inline const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> entries = [] {
        std::vector<RegistryEntry> r;

        r.push_back({"Q_KUMMER", "nonterminating 2phi1(a,b;aq/b;q,-q/b) vs base-q/q^2 product", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "Q_KUMMER", index);
                         return detail::sample_admissible([&] {
                             const double b = rng.sign() * rng.uniform(q + 0.15, 6.0);
                             double a = rng.uniform(-1.5, 1.5);
                             if (!(std::fabs(a * q / b) <= 0.95)) a *= 0.3;
                             ParamMap pm{{"a", a}, {"b", b}, {"q", q}};
                             return std::make_pair(pm, check_q_kummer(a, b, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"ROGERS_6PHI5", "very-well-poised 6phi5 summation vs four-quotient product", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "ROGERS_6PHI5", index);
                         return detail::sample_admissible([&] {
                             const double a = rng.uniform(0.02, 0.85);
                             const double b = rng.uniform(1.3, 6.0);
                             const double c = rng.uniform(1.3, 6.0);
                             const double d = rng.uniform(1.3, 6.0);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"q", q}};
                             return std::make_pair(pm, check_rogers_6phi5(a, b, c, d, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"HEINE_II", "second iterate of Heine's 2phi1 transformation", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "HEINE_II", index);
                         return detail::sample_admissible([&] {
                             const double b = rng.sign() * rng.uniform(1.2, 6.0);
                             const double c = rng.sign() * rng.uniform(0.1, 0.9);
                             const double z = rng.sign() * rng.uniform(0.05, 0.9);
                             double a = rng.uniform(-2.0, 2.0);
                             if (std::fabs(b * z) > 0.95 || std::fabs(a * b * z / c) > 25.0)
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"z", z}, {"q", q}};
                             return std::make_pair(pm, check_heine_ii(a, b, c, z, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"LEM23_3PHI2", "(m+1)-term 3phi2 summation, m in 0..3", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "LEM23_3PHI2", index);
                         return detail::sample_admissible([&] {
                             const int m = static_cast<int>(rng.uniform_int(0, 3));
                             const double a = rng.sign() * rng.uniform(1.5, 8.0);
                             const double b = rng.sign() * rng.uniform(1.5, 8.0);
                             const double c = rng.sign() * rng.uniform(0.1, 0.9);
                             const double d = rng.sign() * rng.uniform(0.05, 0.9);
                             if (!(std::fabs(c * std::pow(q, -m) / (a * b)) <= 0.9))
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             double qj = 1.0;
                             for (int j = 0; j <= m; ++j) {
                                 if (std::fabs(1.0 - a * b * q / c * qj) < 1e-3 ||
                                     std::fabs(1.0 - d * qj) < 1e-3)
                                     return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                                 qj *= q;
                             }
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"d", d},
                                         {"m", static_cast<double>(m)}, {"q", q}};
                             return std::make_pair(pm, check_lemma23(a, b, c, d, m, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"Q_GAUSS", "classical q-Gauss summation 2phi1(a,b;c;q,c/ab)", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "Q_GAUSS", index);
                         return detail::sample_admissible([&] {
                             const double a = rng.sign() * rng.uniform(1.3, 7.0);
                             const double b = rng.sign() * rng.uniform(1.3, 7.0);
                             const double c = rng.sign() * rng.uniform(0.05, 0.9);
                             if (!(std::fabs(c / (a * b)) <= 0.9))
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"q", q}};
                             return std::make_pair(pm, check_q_gauss(a, b, c, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"LEM23_M1_CASE", "two-term correction form of the m=1 3phi2 summation", true, 1e-9,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "LEM23_M1_CASE", index);
                         return detail::sample_admissible([&] {
                             const double a = rng.sign() * rng.uniform(1.5, 8.0);
                             const double b = rng.sign() * rng.uniform(1.5, 8.0);
                             const double c = rng.sign() * rng.uniform(0.1, 0.9);
                             const double d = rng.sign() * rng.uniform(0.05, 0.9);
                             if (!(std::fabs(c / (a * b * q)) <= 0.9) ||
                                 std::fabs(1.0 - a * b * q / c) < 1e-2 || std::fabs(1.0 - d) < 1e-2)
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"d", d}, {"q", q}};
                             return std::make_pair(pm, check_lemma23_m1(a, b, c, d, Base{q}, policy, tol));
                         });
                     }});

        auto sample_curious_params = [](SampleRng& rng, double q, double* a, double* b, double* c) {
            *a = rng.uniform(0.05, 1.6);
            *b = rng.sign() * rng.uniform(0.05, std::min(0.88 / q, 2.0));
            const double scale = (*a + 1.0) * (*a + std::fabs(*b));
            *c = rng.sign() * (1.25 * scale + rng.uniform(0.5, 7.0));
        };

        r.push_back({"CURIOUS_3_1", "expansion of (b^2q;q)_inf/(bq;q)_inf with quadratic prefactors", true,
                     1e-8,
                     [sample_curious_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                             const TruncationPolicy& policy) {
                         SampleRng rng(seed, "CURIOUS_3_1", index);
                         return detail::sample_admissible([&] {
                             double a, b, c;
                             sample_curious_params(rng, q, &a, &b, &c);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"q", q}};
                             return std::make_pair(pm, check_curious_3_1(a, b, c, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"TEN_PHI_9", "terminating very-well-poised 10phi9 summation, n <= 6", true, 1e-11,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy&) {
                         SampleRng rng(seed, "TEN_PHI_9", index);
                         return detail::sample_admissible([&] {
                             const int n = static_cast<int>(rng.uniform_int(0, 6));
                             const double a = rng.uniform(0.05, 0.85);
                             const double b = rng.uniform(0.05, 0.85);
                             ParamMap pm{{"a", a}, {"b", b}, {"n", static_cast<double>(n)}, {"q", q}};
                             return std::make_pair(pm, check_10phi9(a, b, n, Base{q}, tol));
                         });
                     }});

        r.push_back({"TERMINATING_3_2", "terminating expansion of (c^2q;q)_n/(cq;q)_n, n <= 6", true, 1e-10,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy&) {
                         SampleRng rng(seed, "TERMINATING_3_2", index);
                         return detail::sample_admissible([&] {
                             const int n = static_cast<int>(rng.uniform_int(0, 6));
                             const double a = rng.sign() * rng.uniform(0.1, 3.0);
                             const double b = rng.sign() * rng.uniform(0.3, 6.0);
                             const double c = rng.sign() * rng.uniform(0.1, 0.9);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"n", static_cast<double>(n)},
                                         {"q", q}};
                             return std::make_pair(pm, check_terminating_3_2(a, b, c, n, Base{q}, tol));
                         });
                     }});

        r.push_back({"THEOREM_3_1", "alternating expansion of (-bq;q)_inf/(-q;q)_inf with base-q^2 products",
                     true, 1e-8,
                     [sample_curious_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                             const TruncationPolicy& policy) {
                         SampleRng rng(seed, "THEOREM_3_1", index);
                         return detail::sample_admissible([&] {
                             double a, b, c;
                             sample_curious_params(rng, q, &a, &b, &c);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"q", q}};
                             return std::make_pair(pm, check_theorem_3_1(a, b, c, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"QUADRATIC_3_4", "quadratic expansion with its even/odd 3phi2 split", true, 1e-10,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "QUADRATIC_3_4", index);
                         return detail::sample_admissible([&] {
                             const double a = rng.sign() * rng.uniform(0.02, 0.9);
                             const double b = rng.sign() * rng.uniform(0.05, 2.5);
                             ParamMap pm{{"a", a}, {"b", b}, {"q", q}};
                             return std::make_pair(pm, check_quadratic_3_4(a, b, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"THEOREM_3_2", "expansion of (z;q)_inf/(z/b;q)_inf with an inner 2phi1", true, 1e-8,
                     [sample_curious_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                             const TruncationPolicy& policy) {
                         SampleRng rng(seed, "THEOREM_3_2", index);
                         return detail::sample_admissible([&] {
                             double a, b, c;
                             sample_curious_params(rng, q, &a, &b, &c);
                             if (std::fabs(b) < 0.15)
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             const double z = b * rng.sign() * rng.uniform(0.05, 0.85);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"z", z}, {"q", q}};
                             CheckResult res = check_theorem_3_2(a, b, c, z, Base{q}, policy, tol);
                             if (res.status == CheckStatus::diverged)
                                 res.status = CheckStatus::skipped_pole;  // inadmissible draw, retry
                             return std::make_pair(pm, res);
                         });
                     }});

        r.push_back({"THEOREM_3_3", "expansion with an inner terminating 3phi2 and e-weight, m <= 3", true,
                     1e-8,
                     [sample_curious_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                             const TruncationPolicy& policy) {
                         SampleRng rng(seed, "THEOREM_3_3", index);
                         return detail::sample_admissible([&] {
                             const int m = static_cast<int>(rng.uniform_int(0, 3));
                             double a, b, c;
                             sample_curious_params(rng, q, &a, &b, &c);
                             b = rng.sign() * rng.uniform(0.2, 0.85) * std::pow(q, m - 1.0);
                             const double e = rng.sign() * rng.uniform(0.0, 0.9);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"e", e},
                                         {"m", static_cast<double>(m)}, {"q", q}};
                             return std::make_pair(pm, check_theorem_3_3(a, b, c, e, m, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"Q_BETA_4_3", "q-integral form of the q-binomial theorem vs Gamma_q ratio", true, 1e-10,
                     [](std::uint64_t seed, std::uint64_t index, double q, double tol,
                        const TruncationPolicy& policy) {
                         SampleRng rng(seed, "Q_BETA_4_3", index);
                         return detail::sample_admissible([&] {
                             const double alpha = rng.uniform(0.3, 4.0);
                             const double beta = rng.uniform(0.3, 4.0);
                             ParamMap pm{{"alpha", alpha}, {"beta", beta}, {"q", q}};
                             return std::make_pair(pm, check_q_beta(alpha, beta, Base{q}, policy, tol));
                         });
                     }});

        auto sample_qbeta_params = [](SampleRng& rng) {
            QBetaParams p;
            p.alpha = rng.uniform(0.5, 3.0);
            p.beta = rng.uniform(0.5, 2.5);
            p.a = rng.uniform(0.05, 0.8);
            p.c = (p.a + 1.0) * (p.a + 1.0) + rng.uniform(0.8, 8.0);
            return p;
        };

        r.push_back({"QBETAT_4_5", "generalized q-beta integral with inner 2phi1", true, 1e-8,
                     [sample_qbeta_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                           const TruncationPolicy& policy) {
                         SampleRng rng(seed, "QBETAT_4_5", index);
                         return detail::sample_admissible([&] {
                             QBetaParams p = sample_qbeta_params(rng);
                             ParamMap pm{{"alpha", p.alpha}, {"beta", p.beta}, {"a", p.a}, {"c", p.c},
                                         {"q", q}};
                             return std::make_pair(pm, check_qbetat(p, Base{q}, policy, tol));
                         });
                     }});

        r.push_back({"QBETAT2_4_6", "q-beta-type integral with inner terminating 3phi2 and e-weight", true,
                     1e-8,
                     [sample_qbeta_params](std::uint64_t seed, std::uint64_t index, double q, double tol,
                                           const TruncationPolicy& policy) {
                         SampleRng rng(seed, "QBETAT2_4_6", index);
                         return detail::sample_admissible([&] {
                             QBetaParams p = sample_qbeta_params(rng);
                             p.m = static_cast<int>(rng.uniform_int(0, 3));
                             p.beta = std::max(0.0, p.m - 1.0) + 0.15 + rng.uniform(0.0, 1.8);
                             for (int j = 0; j < p.m; ++j)
                                 if (std::fabs(2.0 * p.beta - j) < 0.05)
                                     return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             p.e = rng.sign() * rng.uniform(0.0, 0.8);
                             ParamMap pm{{"beta", p.beta}, {"a", p.a}, {"c", p.c}, {"e", p.e},
                                         {"m", static_cast<double>(p.m)}, {"q", q}};
                             return std::make_pair(pm, check_qbetat2(p, Base{q}, policy, tol));
                         });
                     }});

        // classical integral suites; the q grid does not apply
        auto beta_grid = [](SampleRng& rng, std::uint64_t index) {
            static constexpr double kGrid[4] = {0.5, 0.9, 1.2, 2.5};
            return index < 4 ? kGrid[index] : rng.uniform(0.3, 3.2);
        };

        r.push_back({"BETAF_1_1", "Euler beta integral vs Gamma ratio", false, 1e-9,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "BETAF_1_1", index);
                         return detail::sample_admissible([&] {
                             const double beta = beta_grid(rng, index);
                             const double alpha = rng.uniform(0.3, 4.0);
                             ParamMap pm{{"alpha", alpha}, {"beta", beta}};
                             return std::make_pair(pm, check_beta(alpha, beta, tol));
                         });
                     }});

        r.push_back({"SPEC2_1_2", "beta-type evaluation with t^beta weight vs Gamma(beta)^2/(2 Gamma(2beta))",
                     false, 1e-7,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "SPEC2_1_2", index);
                         return detail::sample_admissible([&] {
                             const double beta = beta_grid(rng, index);
                             const double a = rng.uniform(0.05, 1.5);
                             const double c = (a + 1.0) * (a + 1.0) + rng.uniform(0.5, 8.0);
                             ParamMap pm{{"beta", beta}, {"a", a}, {"c", c}};
                             return std::make_pair(pm, check_spec2(beta, a, c, tol));
                         });
                     }});

        r.push_back({"SPEC3_1_3", "beta-type evaluation with the extra quadratic factor c - a^2 + t^2",
                     false, 1e-7,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "SPEC3_1_3", index);
                         return detail::sample_admissible([&] {
                             const double beta = beta_grid(rng, index);
                             const double a = rng.uniform(0.05, 1.5);
                             const double c = (a + 1.0) * (a + 1.0) + rng.uniform(0.5, 8.0);
                             ParamMap pm{{"beta", beta}, {"a", a}, {"c", c}};
                             return std::make_pair(pm, check_spec3(beta, a, c, tol));
                         });
                     }});

        r.push_back({"BETAT_5_1", "generalized beta evaluation with 2F1 kernel", false, 1e-7,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "BETAT_5_1", index);
                         return detail::sample_admissible([&] {
                             BetaFamilyParams p;
                             p.beta = beta_grid(rng, index);
                             p.alpha = rng.uniform(0.4, 3.0);
                             p.a = rng.uniform(0.05, 1.2);
                             p.c = (p.a + 1.0) * (p.a + 1.0) + rng.uniform(0.5, 8.0);
                             ParamMap pm{{"alpha", p.alpha}, {"beta", p.beta}, {"a", p.a}, {"c", p.c}};
                             return std::make_pair(pm, check_betat(p, tol));
                         });
                     }});

        r.push_back({"SPEC1_5_2", "fractional-integral special case over (a+t)^{2 beta + 1}", false, 1e-7,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "SPEC1_5_2", index);
                         return detail::sample_admissible([&] {
                             const double beta = beta_grid(rng, index);
                             const double alpha = rng.uniform(0.4, 3.0);
                             const double a = rng.uniform(1.06, 6.0);
                             ParamMap pm{{"alpha", alpha}, {"beta", beta}, {"a", a}};
                             return std::make_pair(pm, check_spec1(alpha, beta, a, tol));
                         });
                     }});

        r.push_back({"ERDELYI_5_4", "fractional-integral representation of 2F1 with two inner kernels",
                     false, 1e-7,
                     [](std::uint64_t seed, std::uint64_t index, double, double tol,
                        const TruncationPolicy&) {
                         SampleRng rng(seed, "ERDELYI_5_4", index);
                         return detail::sample_admissible([&] {
                             const double a = rng.uniform(0.3, 1.6);
                             const double b = rng.uniform(0.3, 1.6);
                             const double mu = rng.uniform(0.4, 2.0);
                             const double c = mu + rng.uniform(0.4, 2.5);
                             const double lambda = rng.uniform(0.4, 2.0);
                             const double x = rng.uniform(0.1, 0.9);
                             ParamMap pm{{"a", a}, {"b", b}, {"c", c}, {"mu", mu},
                                         {"lambda", lambda}, {"x", x}};
                             return std::make_pair(pm, check_erdelyi(a, b, c, mu, lambda, x, tol));
                         });
                     }});

        r.push_back({"SPEC5_5_5", "beta-type evaluation over (c-t^2)^{2 beta} with 2F1(t^2/c)", false, 1e-7,
                     [beta_grid](std::uint64_t seed, std::uint64_t index, double, double tol,
                                 const TruncationPolicy&) {
                         SampleRng rng(seed, "SPEC5_5_5", index);
                         return detail::sample_admissible([&] {
                             const double beta = beta_grid(rng, index);
                             const double alpha = rng.uniform(0.4, 3.0);
                             const double c = rng.uniform(1.06, 9.0);
                             ParamMap pm{{"alpha", alpha}, {"beta", beta}, {"c", c}};
                             return std::make_pair(pm, check_spec5(alpha, beta, c, tol));
                         });
                     }});

        auto sample_betat2 = [](SampleRng& rng, std::uint64_t index, BetaFamilyParams* p) {
            static constexpr double kGrid[4] = {0.5, 0.9, 1.2, 2.5};
            p->m = static_cast<int>(rng.uniform_int(0, 3));
            const double lo = std::max(0.0, p->m - 1.0);
            p->beta = index < 4 && kGrid[index] > lo + 0.12 ? kGrid[index] : lo + 0.12 + rng.uniform(0.0, 2.0);
            for (int j = 0; j < p->m; ++j)
                if (std::fabs(2.0 * p->beta - j) < 0.05) return false;
            p->e = rng.sign() * rng.uniform(0.0, 0.8);
            return true;
        };

        r.push_back({"BETAT2_5_6", "beta-type evaluation with terminating 2F1 and e-weight", false, 1e-7,
                     [sample_betat2](std::uint64_t seed, std::uint64_t index, double, double tol,
                                     const TruncationPolicy&) {
                         SampleRng rng(seed, "BETAT2_5_6", index);
                         return detail::sample_admissible([&] {
                             BetaFamilyParams p;
                             if (!sample_betat2(rng, index, &p))
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             p.a = rng.uniform(0.05, 1.2);
                             p.c = (p.a + 1.0) * (p.a + 1.0) + rng.uniform(0.5, 8.0);
                             ParamMap pm{{"beta", p.beta}, {"a", p.a}, {"c", p.c}, {"e", p.e},
                                         {"m", static_cast<double>(p.m)}};
                             return std::make_pair(pm, check_betat2(p, tol));
                         });
                     }});

        r.push_back({"SPEC4_5_7", "weighted beta evaluation with 2F1(1/(1-et)) kernel", false, 1e-7,
                     [sample_betat2](std::uint64_t seed, std::uint64_t index, double, double tol,
                                     const TruncationPolicy&) {
                         SampleRng rng(seed, "SPEC4_5_7", index);
                         return detail::sample_admissible([&] {
                             BetaFamilyParams p;
                             if (!sample_betat2(rng, index, &p))
                                 return std::make_pair(ParamMap{}, skipped_pole_result("resample"));
                             ParamMap pm{{"beta", p.beta}, {"e", p.e}, {"m", static_cast<double>(p.m)}};
                             return std::make_pair(pm, check_spec4(p.beta, p.m, p.e, tol));
                         });
                     }});

        r.push_back({"HALFLINE", "half-line substitution route agrees with the direct [0,1] evaluation",
                     false, 1e-6,
                     [](std::uint64_t seed, std::uint64_t index, double, double tol,
                        const TruncationPolicy&) {
                         SampleRng rng(seed, "HALFLINE", index);
                         static constexpr IntegralId kRotation[5] = {
                             IntegralId::BETAF_1_1, IntegralId::SPEC2_1_2, IntegralId::SPEC3_1_3,
                             IntegralId::SPEC5_5_5, IntegralId::SPEC4_5_7};
                         return detail::sample_admissible([&] {
                             const IntegralId id = kRotation[index % 5];
                             BetaFamilyParams p;
                             p.alpha = rng.uniform(0.4, 3.0);
                             p.beta = rng.uniform(0.4, 2.5);
                             p.a = rng.uniform(0.05, 1.2);
                             p.c = std::max((p.a + 1.0) * (p.a + 1.0) + rng.uniform(0.5, 8.0),
                                            rng.uniform(1.06, 9.0));
                             p.m = static_cast<int>(rng.uniform_int(0, 2));
                             if (p.beta <= std::max(0.0, p.m - 1.0) + 0.12) p.m = 0;
                             p.e = rng.sign() * rng.uniform(0.0, 0.7);
                             ParamMap pm{{"selector", static_cast<double>(index % 5)},
                                         {"alpha", p.alpha}, {"beta", p.beta}, {"a", p.a},
                                         {"c", p.c},         {"e", p.e},
                                         {"m", static_cast<double>(p.m)}};
                             return std::make_pair(pm, halfline_transform_check(id, p, tol));
                         });
                     }});

        r.push_back({"Q_LIMIT_BRIDGE", "q-integral deviations from the classical value shrink as q -> 1",
                     false, 1e-6,
                     [sample_qbeta_params](std::uint64_t seed, std::uint64_t index, double, double,
                                           const TruncationPolicy& policy) {
                         SampleRng rng(seed, "Q_LIMIT_BRIDGE", index);
                         return detail::sample_admissible([&] {
                             QBetaParams p = sample_qbeta_params(rng);
                             const QLimitKind kind = (index % 2 == 0) ? QLimitKind::q_beta : QLimitKind::qbetat;
                             ParamMap pm{{"kind", static_cast<double>(index % 2)}, {"alpha", p.alpha},
                                         {"beta", p.beta},  {"a", p.a}, {"c", p.c}};
                             CheckResult res;
                             try {
                                 const auto probe = q_limit_probe(kind, p, {0.9, 0.99, 0.999}, policy);
                                 double worst_ratio = 0.0;
                                 std::string note;
                                 for (size_t i = 0; i + 1 < probe.size(); ++i) {
                                     if (probe[i].deviation > 0.0)
                                         worst_ratio = std::max(worst_ratio,
                                                                probe[i + 1].deviation / probe[i].deviation);
                                 }
                                 for (const auto& pr : probe)
                                     note += "dev(q=" + std::to_string(pr.q) + ")=" +
                                             std::to_string(pr.deviation) + " ";
                                 res.lhs = worst_ratio;
                                 res.rhs = 1.0;
                                 res.abs_err = std::fabs(1.0 - worst_ratio);
                                 res.rel_err = res.abs_err;
                                 res.status = worst_ratio < 1.0 ? CheckStatus::pass : CheckStatus::fail;
                                 res.terms_used = static_cast<long>(probe.size());
                                 res.note = note;
                             } catch (const DomainError& e) {
                                 res = skipped_pole_result(e.what());
                             }
                             return std::make_pair(pm, res);
                         });
                     }});

        return r;
    }();
    return entries;
}

inline const RegistryEntry* find_registry_entry(const std::string& id) {
    for (const auto& e : registry())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace qsv
