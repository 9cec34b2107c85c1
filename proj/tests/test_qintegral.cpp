#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsv/qintegral.hpp"
#include "oracles.hpp"

using namespace qsv;

TEST_CASE("q_integrate of monomials has geometric-series values") {
    const Base q{0.5};
    CHECK_THAT(q_integrate({[](double) { return 1.0; }, "one"}, q),
               Catch::Matchers::WithinRel(1.0, 1e-14));
    CHECK_THAT(q_integrate({[](double t) { return t; }, "t"}, q),
               Catch::Matchers::WithinRel(1.0 / 1.5, 1e-14));
    // t^{alpha-1} at alpha = 3: 1/(1+q+q^2) = 4/7
    CHECK_THAT(q_integrate({[](double t) { return t * t; }, "t^2"}, q),
               Catch::Matchers::WithinRel(4.0 / 7.0, 1e-14));
}

TEST_CASE("q_integrate signals on non-decaying integrands") {
    CHECK_THROWS_AS(q_integrate({[](double t) { return 1.0 / (t * t); }, "blowup"}, Base{0.5}),
                    DivergenceError);
}

TEST_CASE("qgamma_beta_ratio matches the direct q-gamma ratio") {
    const Base q{0.5};
    for (double x : {0.7, 1.5, 2.2})
        for (double y : {0.9, 1.3, 3.0})
            CHECK_THAT(qgamma_beta_ratio(x, y, q),
                       Catch::Matchers::WithinRel(qgamma(x, q) * qgamma(y, q) / qgamma(x + y, q), 1e-12));
}

TEST_CASE("q-beta integral evaluation") {
    const Base q{0.5};
    // beta = 1: integrand is t^{alpha-1}, value (1-q)/(1-q^alpha)
    const CheckResult b1 = check_q_beta(1.7, 1.0, q);
    CHECK(b1.passed());
    CHECK_THAT(b1.lhs, Catch::Matchers::WithinRel((1.0 - 0.5) / (1.0 - std::pow(0.5, 1.7)), 1e-12));

    const CheckResult unit = check_q_beta(1.0, 1.0, q);
    CHECK(unit.passed());
    CHECK_THAT(unit.lhs, Catch::Matchers::WithinRel(1.0, 1e-13));

    const CheckResult gen = check_q_beta(2.5, 1.7, q, kDefaultPolicy, 1e-10);
    CHECK(gen.passed());
    // brute-force the q-sum with plain products
    double s = 0.0;
    for (int k = 0; k < 120; ++k) {
        const double t = std::pow(0.5, k);
        s += oracle::qpoch_inf(0.5 * t, 0.5) / oracle::qpoch_inf(std::pow(0.5, 1.7) * t, 0.5) *
             std::pow(t, 1.5) * t;
    }
    CHECK_THAT(gen.lhs, Catch::Matchers::WithinRel(0.5 * s, 1e-12));
}

TEST_CASE("generalized q-beta integral") {
    const Base q{0.5};
    QBetaParams p;
    p.alpha = 2.2;
    p.beta = 1.4;
    p.a = 0.6;
    p.c = 11.0;
    CHECK(check_qbetat(p, q, kDefaultPolicy, 1e-8).passed());

    // alpha = beta + 1 makes the inner series collapse to 1
    QBetaParams p2;
    p2.alpha = 2.2;
    p2.beta = 1.2;
    p2.a = 0.5;
    p2.c = 9.0;
    CHECK(check_qbetat(p2, q, kDefaultPolicy, 1e-9).passed());

    // large c approaches the plain q-beta value
    QBetaParams p3;
    p3.alpha = 2.0;
    p3.beta = 1.5;
    p3.a = 0.3;
    p3.c = 1e8;
    const CheckResult lim = check_qbetat(p3, q, kDefaultPolicy, 1e-6);
    const CheckResult plain = check_q_beta(2.0, 1.5, q);
    CHECK(lim.passed());
    CHECK_THAT(lim.lhs, Catch::Matchers::WithinRel(plain.lhs, 1e-6));
}

TEST_CASE("q-beta-type integral with inner terminating 3phi2") {
    const Base q{0.5};
    QBetaParams p;
    p.beta = 2.1;
    p.a = 0.3;
    p.c = 10.0;
    p.e = 0.2;
    p.m = 2;
    CHECK(check_qbetat2(p, q, kDefaultPolicy, 1e-8).passed());

    // m = 0, e = 0 equals the alpha = beta + 1 case of the generalized form
    QBetaParams p0;
    p0.beta = 1.5;
    p0.a = 0.4;
    p0.c = 8.0;
    const CheckResult v46 = check_qbetat2(p0, q, kDefaultPolicy, 1e-9);
    QBetaParams p45 = p0;
    p45.alpha = p0.beta + 1.0;
    const CheckResult v45 = check_qbetat(p45, q, kDefaultPolicy, 1e-9);
    CHECK(v46.passed());
    CHECK(v45.passed());
    CHECK_THAT(v46.lhs, Catch::Matchers::WithinRel(v45.lhs, 1e-10));
}

TEST_CASE("e = 0 case maps to alpha = beta + 1 - m through the contiguous transformation") {
    // I_{alpha=beta+1-m} = ((q^{2b+1-m};q)_m / (q^{b+1-m};q)_m) * I_{e=0,m}
    const Base q{0.5};
    QBetaParams p46;
    p46.beta = 1.5;
    p46.a = 0.4;
    p46.c = 8.0;
    p46.m = 1;
    const CheckResult v46 = check_qbetat2(p46, q, kDefaultPolicy, 1e-8);
    QBetaParams p45 = p46;
    p45.alpha = p46.beta + 1.0 - p46.m;
    const CheckResult v45 = check_qbetat(p45, q, kDefaultPolicy, 1e-8);
    CHECK(v46.passed());
    CHECK(v45.passed());
    const double kappa = qpoch_finite(std::pow(0.5, 2.0 * p46.beta + 1.0 - p46.m), q, p46.m) /
                         qpoch_finite(std::pow(0.5, p46.beta + 1.0 - p46.m), q, p46.m);
    CHECK_THAT(v45.lhs, Catch::Matchers::WithinRel(kappa * v46.lhs, 1e-8));
}

TEST_CASE("q-integral checks hold across the q grid") {
    for (double qv : {0.3, 0.8}) {
        const Base q{qv};
        CHECK(check_q_beta(2.5, 1.7, q, kDefaultPolicy, 1e-10).passed());
        QBetaParams p;
        p.alpha = 1.8;
        p.beta = 1.1;
        p.a = 0.4;
        p.c = 7.0;
        CHECK(check_qbetat(p, q, kDefaultPolicy, 1e-8).passed());
        p.m = 1;
        p.e = -0.3;
        p.beta = 1.4;
        CHECK(check_qbetat2(p, q, kDefaultPolicy, 1e-8).passed());
    }
}

TEST_CASE("q -> 1 probe: deviations from the classical value decrease") {
    QBetaParams p;
    p.alpha = 2.0;
    p.beta = 3.0;
    const auto probe = q_limit_probe(QLimitKind::q_beta, p);
    REQUIRE(probe.size() == 3);
    CHECK_THAT(probe[0].I_classical, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-9));
    CHECK(probe[1].deviation < probe[0].deviation);
    CHECK(probe[2].deviation < probe[1].deviation);

    QBetaParams g;
    g.alpha = 2.2;
    g.beta = 1.4;
    g.a = 0.6;
    g.c = 11.0;
    const auto probe2 = q_limit_probe(QLimitKind::qbetat, g);
    CHECK(probe2[1].deviation < probe2[0].deviation);
    CHECK(probe2[2].deviation < probe2[1].deviation);

    // constant integrand: the q-integral is exactly 1 at every base
    for (double qv : {0.9, 0.99, 0.999}) {
        const double v = q_integrate({[](double) { return 1.0; }, "one"}, Base{qv},
                                     kDefaultPolicy.with_max_terms(200000));
        CHECK_THAT(v, Catch::Matchers::WithinRel(1.0, 1e-12));
    }
}

TEST_CASE("q-beta value is symmetric in its exponent pair") {
    const Base q{0.5};
    const CheckResult ab = check_q_beta(2.5, 1.7, q);
    const CheckResult ba = check_q_beta(1.7, 2.5, q);
    CHECK_THAT(ab.lhs, Catch::Matchers::WithinRel(ba.lhs, 1e-12));
}
