#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qsv/quadrature.hpp"

using namespace qsv;

TEST_CASE("integrate handles flat and singular integrands") {
    QuadratureRequest one;
    one.integrand = [](double) { return 1.0; };
    CHECK_THAT(integrate(one).value, Catch::Matchers::WithinRel(1.0, 1e-12));

    QuadratureRequest rsqrt;
    rsqrt.integrand = [](double t) { return 1.0 / std::sqrt(t); };
    rsqrt.p0 = -0.5;
    CHECK_THAT(integrate(rsqrt).value, Catch::Matchers::WithinRel(2.0, 1e-11));

    QuadratureRequest beta_like;
    beta_like.integrand = [](double t) { return std::pow(t, 0.2) * std::pow(1.0 - t, 2.4); };
    beta_like.p0 = 0.2;
    beta_like.p1 = 2.4;
    CHECK_THAT(integrate(beta_like).value,
               Catch::Matchers::WithinRel(gamma_ratio({1.2, 3.4}, {4.6}), 1e-11));

    QuadratureRequest bad;
    bad.integrand = [](double) { return 1.0; };
    bad.p0 = -1.5;
    CHECK_THROWS_AS(integrate(bad), std::invalid_argument);
}

TEST_CASE("refinement shrinks the reported error estimate") {
    int prev_levels = 0;
    double prev_err = 0;
    (void)prev_levels;
    (void)prev_err;
    const QuadratureResult r = integrate01(
        [](double t, double omt) { return std::pow(t, 0.3) * std::pow(omt, 0.7); }, 1e-12);
    CHECK(r.converged);
    CHECK(r.error_estimate <= 1e-12 * std::fabs(r.value) + 1e-18);
}

TEST_CASE("Euler beta integral check") {
    CHECK(check_beta(1.0, 1.0).passed());
    const CheckResult r = check_beta(2.0, 3.0);
    CHECK(r.passed());
    CHECK_THAT(r.lhs, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-10));
    const CheckResult arcsine = check_beta(0.5, 0.5);
    CHECK(arcsine.passed());
    CHECK_THAT(arcsine.lhs, Catch::Matchers::WithinRel(std::numbers::pi, 1e-10));
}

TEST_CASE("generalized beta evaluation with 2F1 kernel") {
    BetaFamilyParams p;
    p.alpha = 1.8;
    p.beta = 1.1;
    p.a = 0.7;
    p.c = 9.0;
    CHECK(check_betat(p, 1e-7).passed());

    // alpha = beta + 1 instance carries the anchor value 1/2
    BetaFamilyParams anchor;
    anchor.alpha = 2.0;
    anchor.beta = 1.0;
    anchor.a = 1.0;
    anchor.c = 5.0;
    const CheckResult r = check_betat(anchor, 1e-7);
    CHECK(r.passed());
    CHECK_THAT(r.lhs, Catch::Matchers::WithinAbs(0.5, 1e-7));

    // large c approaches the plain beta integral
    BetaFamilyParams big;
    big.alpha = 1.8;
    big.beta = 1.1;
    big.a = 0.7;
    big.c = 1e8;
    const CheckResult lim = check_betat(big, 1e-6);
    CHECK(lim.passed());
    CHECK_THAT(lim.lhs, Catch::Matchers::WithinRel(gamma_ratio({1.8, 1.1}, {2.9}), 1e-6));
}

TEST_CASE("anchored special case: t^beta weight") {
    const CheckResult anchor = check_spec2(1.0, 1.0, 5.0, 1e-7);
    CHECK(anchor.passed());
    CHECK_THAT(anchor.lhs, Catch::Matchers::WithinAbs(0.5, 1e-7));

    const CheckResult half = check_spec2(0.5, 0.3, 4.0, 1e-7);
    CHECK(half.passed());
    CHECK_THAT(half.rhs, Catch::Matchers::WithinRel(std::numbers::pi / 2.0, 1e-12));

    const CheckResult two = check_spec2(2.0, 2.0, 20.0, 1e-7);
    CHECK(two.passed());
    CHECK_THAT(two.lhs, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-7));
}

TEST_CASE("special case with the extra quadratic factor") {
    const CheckResult r1 = check_spec3(1.0, 1.0, 5.0, 1e-7);
    CHECK(r1.passed());
    CHECK_THAT(r1.lhs, Catch::Matchers::WithinRel(1.0, 1e-7));
    CHECK(check_spec3(1.5, 0.5, 6.0, 1e-7).passed());
    CHECK(check_spec3(0.75, 0.2, 3.0, 1e-7).passed());
}

TEST_CASE("fractional-integral special case over (a+t)^{2 beta + 1}") {
    CHECK(check_spec1(2.0, 1.0, 0.5, 1e-7).passed());  // terminating kernel, small a admissible
    CHECK(check_spec1(2.3, 1.3, 2.0, 1e-7).passed());
    // huge a approaches the plain beta integral
    const CheckResult lim = check_spec1(1.8, 1.1, 1e6, 1e-6);
    CHECK(lim.passed());
}

TEST_CASE("consistency: the 2F1-kernel evaluation matches its named special cases") {
    // alpha = beta + 1 <-> t^beta-weight form
    BetaFamilyParams p;
    p.beta = 1.3;
    p.alpha = 2.3;
    p.a = 0.6;
    p.c = 7.0;
    const CheckResult general = check_betat(p, 1e-7);
    const CheckResult direct = check_spec2(1.3, 0.6, 7.0, 1e-7);
    CHECK(general.passed());
    CHECK(direct.passed());
    CHECK_THAT(general.lhs, Catch::Matchers::WithinRel(direct.lhs, 1e-8));

    // alpha = beta <-> quadratic-factor form
    BetaFamilyParams p3 = p;
    p3.alpha = p3.beta;
    const CheckResult general3 = check_betat(p3, 1e-7);
    const CheckResult direct3 = check_spec3(1.3, 0.6, 7.0, 1e-7);
    CHECK(general3.passed());
    CHECK(direct3.passed());
    CHECK_THAT(general3.lhs, Catch::Matchers::WithinRel(direct3.lhs, 1e-8));
}

TEST_CASE("fractional-integral representation of 2F1") {
    const CheckResult x0 = check_erdelyi(0.9, 1.1, 3.0, 1.4, 1.0, 0.0);
    CHECK(x0.passed());
    CHECK(x0.lhs == 1.0);

    CHECK(check_erdelyi(0.9, 1.1, 3.0, 1.4, 1.0, 0.5, 1e-7).passed());
    // lambda = mu = a route
    CHECK(check_erdelyi(1.2, 0.8, 2.5, 1.2, 1.2, 0.4, 1e-7).passed());
}

TEST_CASE("fractional-integral route agrees with its named special case") {
    // the alpha-beta replacement pattern turns the representation into the
    // (a+t)-kernel form with x = -1/a; compare both raw integrals
    const double alpha = 2.1, beta = 1.2, a = 2.0;
    const BetaFamilyCase spec1_case = [&] {
        BetaFamilyParams p;
        p.alpha = alpha;
        p.beta = beta;
        p.a = a;
        return make_beta_family_case(IntegralId::SPEC1_5_2, p);
    }();
    const double spec1_integral = integrate01(spec1_case.integrand, 1e-11).value;

    auto inner1 = detail::Hyp2F1Factor(alpha - beta - 1.0, -beta, alpha);
    const double x = -1.0 / a;
    auto erdelyi_integrand = [&](double t, double omt) {
        const double oxt = 1.0 - x * t;
        return std::pow(t, alpha - 1.0) * std::pow(omt, beta - 1.0) *
               std::pow(oxt, -(2.0 * beta + 1.0)) * inner1(x * t);
    };
    const double erdelyi_integral = integrate01(erdelyi_integrand, 1e-11).value;
    // (1 - xt) = (a+t)/a, so the kernels differ by the constant a^{2 beta + 1}
    CHECK_THAT(erdelyi_integral, Catch::Matchers::WithinRel(std::pow(a, 2.0 * beta + 1.0) * spec1_integral, 1e-9));
}

TEST_CASE("terminating-kernel form with e-weight and its reductions") {
    BetaFamilyParams p;
    p.beta = 1.6;
    p.a = 0.5;
    p.c = 8.0;
    p.e = 0.3;
    p.m = 1;
    CHECK(check_betat2(p, 1e-7).passed());

    // m = 0, e = 0 is identical to the t^beta-weight form
    BetaFamilyParams p0;
    p0.beta = 1.3;
    p0.a = 0.6;
    p0.c = 7.0;
    const CheckResult v0 = check_betat2(p0, 1e-7);
    const CheckResult s2 = check_spec2(1.3, 0.6, 7.0, 1e-7);
    CHECK(v0.passed());
    CHECK_THAT(v0.lhs, Catch::Matchers::WithinRel(s2.lhs, 1e-10));

    // e = 0 maps to alpha = beta + 1 - m through the terminating transformation,
    // carrying the Pochhammer ratio (2b+1-m)_m / (b+1-m)_m
    BetaFamilyParams pe;
    pe.beta = 2.5;
    pe.a = 0.5;
    pe.c = 9.0;
    pe.m = 2;
    const CheckResult v56 = check_betat2(pe, 1e-7);
    BetaFamilyParams p51 = pe;
    p51.alpha = pe.beta + 1.0 - pe.m;
    const CheckResult v51 = check_betat(p51, 1e-7);
    CHECK(v56.passed());
    CHECK(v51.passed());
    const double kappa = rising_factorial(2.0 * pe.beta + 1.0 - pe.m, pe.m) /
                         rising_factorial(pe.beta + 1.0 - pe.m, pe.m);
    CHECK_THAT(v51.lhs, Catch::Matchers::WithinRel(kappa * v56.lhs, 1e-8));

    // large c approaches the prefactor-free form
    BetaFamilyParams big = pe;
    big.e = 0.2;
    big.c = 1e8;
    const CheckResult lim = check_betat2(big, 1e-6);
    const CheckResult s4 = check_spec4(pe.beta, pe.m, 0.2, 1e-7);
    CHECK(lim.passed());
    CHECK(s4.passed());
    CHECK_THAT(lim.lhs, Catch::Matchers::WithinRel(s4.lhs, 1e-6));
}

TEST_CASE("prefactor-free weighted form") {
    // m = 0: plain beta integral through the duplication identity
    const CheckResult m0 = check_spec4(1.3, 0, 0.0, 1e-7);
    CHECK(m0.passed());
    CHECK_THAT(m0.lhs, Catch::Matchers::WithinRel(gamma_ratio({2.3, 1.3}, {3.6}), 1e-9));
    CHECK(check_spec4(1.2, 1, 0.4, 1e-7).passed());
    CHECK(check_spec4(2.2, 2, -0.5, 1e-7).passed());
}

TEST_CASE("half-line route matches the direct evaluation") {
    BetaFamilyParams beta23;
    beta23.alpha = 2.0;
    beta23.beta = 3.0;
    const CheckResult r1 = halfline_transform_check(IntegralId::BETAF_1_1, beta23, 1e-6);
    CHECK(r1.passed());
    CHECK_THAT(r1.lhs, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-9));

    BetaFamilyParams anchor;
    anchor.beta = 1.0;
    anchor.a = 1.0;
    anchor.c = 5.0;
    const CheckResult r2 = halfline_transform_check(IntegralId::SPEC2_1_2, anchor, 1e-6);
    CHECK(r2.passed());
    CHECK_THAT(r2.lhs, Catch::Matchers::WithinAbs(0.5, 1e-7));

    // zero integrand maps to zero through both routes
    CHECK(integrate01_halfline([](double, double) { return 0.0; }).value == 0.0);
}

TEST_CASE("beta-type evaluation over (c - t^2)^{2 beta}") {
    // alpha = beta + 1 sits in the 1/2-family of values
    const CheckResult r1 = check_spec5(2.0, 1.0, 5.0, 1e-7);
    CHECK(r1.passed());
    CHECK_THAT(r1.rhs, Catch::Matchers::WithinRel(0.5, 1e-12));
    CHECK(check_spec5(1.6, 0.9, 3.0, 1e-7).passed());
    // large c approaches the plain beta integral value
    const CheckResult lim = check_spec5(1.6, 0.9, 1e6, 1e-6);
    CHECK(lim.passed());
    CHECK_THAT(lim.lhs, Catch::Matchers::WithinRel(gamma_ratio({1.6, 0.9}, {2.5}), 1e-6));
}
