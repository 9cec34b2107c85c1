#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qsv/inversion.hpp"
#include "qsv/sampler.hpp"
#include "oracles.hpp"

using namespace qsv;

namespace {

MatrixPairSpec sample_special(SampleRng& rng) {
    const Rational q = rng.rational_in_01(12);
    const Rational a = rng.small_rational(6, 7);
    const Rational b = rng.small_rational(6, 7);
    const Rational c = rng.small_rational(20, 5) + 8;  // push c away from the quadratic poles
    return MatrixPairSpec::special(a, b, c, q);
}

MatrixPairSpec sample_general(SampleRng& rng) {
    const Rational p1 = rng.small_rational(9, 4);
    const Rational p2 = rng.small_rational(9, 4);
    const Rational r1 = rng.small_rational(9, 4);
    Rational r2 = rng.small_rational(9, 4);
    if (r2 == 0) r2 = 1;
    const Rational d = rng.small_rational(25, 3);
    return MatrixPairSpec::general([p1, p2](long j) { return p1 + p2 * j; },
                                   [r1, r2](long j) { return r1 + r2 * (j + 13); }, d);
}

bool window_is_pole_free(const MatrixPairSpec& pair, long window) {
    try {
        for (long n = 0; n <= window; ++n)
            for (long l = 0; l <= n; ++l) {
                (void)f_entry(pair, n, l);
                (void)g_entry(pair, n, l);
            }
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

}  // namespace

TEST_CASE("diagonal entries are 1, sub-triangular entries are 0") {
    const MatrixPairSpec pair = MatrixPairSpec::special(Rational(1, 3), Rational(1, 5), Rational(7), Rational(1, 2));
    CHECK(f_entry(pair, 4, 4) == Rational(1));
    CHECK(g_entry(pair, 4, 4) == Rational(1));
    CHECK(f_entry(pair, 2, 5) == Rational(0));
    CHECK(g_entry(pair, 2, 5) == Rational(0));
}

TEST_CASE("special f entry one step below the diagonal matches its closed form") {
    const Rational a(1, 3), b(1, 5), c(7), q(1, 2);
    const MatrixPairSpec pair = MatrixPairSpec::special(a, b, c, q);
    for (long k : {0L, 1L, 3L}) {
        const Rational qk = rat_pow(q, k);
        const Rational A = a + b * qk;
        const Rational D = c - a * A;
        const Rational expect =
            (1 - 1 / b) * (1 - A * qk / D) / ((1 - q) * (1 - A * b * qk * q / D));
        CHECK(f_entry(pair, k + 1, k) == expect);
    }
}

TEST_CASE("special g entry one step below the diagonal matches its closed form") {
    const Rational a(1, 3), b(1, 5), c(7), q(1, 2);
    const MatrixPairSpec pair = MatrixPairSpec::special(a, b, c, q);
    for (long l : {0L, 2L}) {
        const long k = l + 1;
        const Rational qk = rat_pow(q, k), ql = rat_pow(q, l);
        const Rational A = a + b * qk;
        const Rational D = c - a * A;
        // sign (-1)^1, exponent q^C(1,2) = q^0 = 1
        const Rational expect = -(c - (a + b * ql) * (a + ql)) / (c - A * (a + qk)) *
                                (1 - rat_pow(q, l - k + 1) / b) * (1 - A * ql * q / D) /
                                ((1 - q) * (1 - A * b * ql / D));
        CHECK(g_entry(pair, k, l) == expect);
    }
}

TEST_CASE("general g entry two steps down matches an independent product expansion") {
    const Rational d(5);
    auto aseq = [](long j) { return Rational(j + 2); };
    auto cseq = [](long j) { return Rational(3 * j + 1); };
    const MatrixPairSpec pair = MatrixPairSpec::general(aseq, cseq, d);
    const long k = 4, l = 2;
    const Rational ck = cseq(k);
    // written out factor by factor, straight from the closed form
    const Rational expect = (aseq(l) * cseq(l) - d) * (aseq(l) - cseq(l)) /
                            ((aseq(k) * ck - d) * (aseq(k) - ck)) *
                            ((aseq(3) - d / ck) * (aseq(3) - ck) * (aseq(4) - d / ck) * (aseq(4) - ck)) /
                            ((cseq(2) - d / ck) * (cseq(2) - ck) * (cseq(3) - d / ck) * (cseq(3) - ck));
    CHECK(g_entry(pair, k, l) == expect);
}

TEST_CASE("substituted general pair reproduces the special pair exactly") {
    const Rational a(1, 3), b(1, 5), c(7), q(1, 2);
    const MatrixPairSpec special = MatrixPairSpec::special(a, b, c, q);
    const MatrixPairSpec general = MatrixPairSpec::general(
        [a, q](long j) { return a + rat_pow(q, j); }, [a, b, q](long j) { return a + b * rat_pow(q, j); }, c);
    for (long n = 0; n <= 7; ++n)
        for (long k = 0; k <= n; ++k) {
            CHECK(f_entry(general, n, k) == f_entry(special, n, k));
            CHECK(g_entry(general, n, k) == g_entry(special, n, k));
        }
}

TEST_CASE("delta orthogonality on reference parameter sets") {
    const MatrixPairSpec special = MatrixPairSpec::special(Rational(1, 3), Rational(1, 5), Rational(7), Rational(1, 2));
    CHECK(delta_check(special, 4, 4) == Rational(1));
    CHECK(delta_check(special, 5, 4) == Rational(0));
    const MatrixPairSpec general = MatrixPairSpec::general(
        [](long j) { return Rational(j + 2); }, [](long j) { return Rational(3 * j + 1); }, Rational(5));
    CHECK(delta_check(general, 6, 0) == Rational(0));
    CHECK(delta_check_reversed(general, 6, 0) == Rational(0));
}

TEST_CASE("delta orthogonality holds exactly over the window for random rational pairs") {
    SampleRng rng(42, "inversion-property", 0);
    int done = 0;
    for (int attempt = 0; attempt < 60 && done < 3; ++attempt) {
        const MatrixPairSpec pair = sample_special(rng);
        if (!window_is_pole_free(pair, 8)) continue;
        ++done;
        for (long n = 0; n <= 8; ++n)
            for (long l = 0; l <= n; ++l) {
                CHECK(delta_check(pair, n, l) == Rational(n == l ? 1 : 0));
                CHECK(delta_check_reversed(pair, n, l) == Rational(n == l ? 1 : 0));
            }
    }
    CHECK(done == 3);
    done = 0;
    for (int attempt = 0; attempt < 60 && done < 3; ++attempt) {
        const MatrixPairSpec pair = sample_general(rng);
        if (!window_is_pole_free(pair, 8)) continue;
        ++done;
        for (long n = 0; n <= 8; ++n)
            for (long l = 0; l <= n; ++l) {
                CHECK(delta_check(pair, n, l) == Rational(n == l ? 1 : 0));
                CHECK(delta_check_reversed(pair, n, l) == Rational(n == l ? 1 : 0));
            }
    }
    CHECK(done == 3);
}

namespace {

// sequences from the derivation of the alternating expansion: a_n = (-bq)^n
// and b_k produced by the q-Kummer summation
struct AlternatingPair {
    double a, b, c;
    Base q;

    double a_seq(long n) const { return std::pow(-b * q.q, static_cast<double>(n)); }

    double b_seq(long k) const {
        const double qk = std::pow(q.q, static_cast<double>(k));
        const double A = a + b * qk;
        const double D = c - a * A;
        const Base q2{q.q * q.q};
        return std::pow(-b * q.q, static_cast<double>(k)) * qpoch_infinite(-q.q, q) *
               qpoch_infinite(A * qk * q.q / D, q2) * qpoch_infinite(A * b * b * qk * q.q * q.q / D, q2) /
               (qpoch_infinite(-b * q.q, q) * qpoch_infinite(A * b * qk * q.q / D, q));
    }
};

}  // namespace

TEST_CASE("inverse relation: both directions of the alternating-expansion pair") {
    const AlternatingPair seqs{0.2, 0.3, 5.0, Base{0.5}};
    InverseRelationCase rel;
    rel.f = [&seqs](long n, long k) { return f_entry_special(seqs.a, seqs.b, seqs.c, seqs.q, n, k); };
    rel.g = [&seqs](long k, long l) { return g_entry_special(seqs.a, seqs.b, seqs.c, seqs.q, k, l); };
    rel.a_seq = [&seqs](long n) { return seqs.a_seq(n); };
    rel.b_seq = [&seqs](long k) { return seqs.b_seq(k); };

    rel.direction = InverseRelationCase::Direction::f_to_g;
    for (long k : {0L, 1L, 2L}) {
        const CheckResult r = apply_inverse_relation(rel, k);
        INFO(r.note);
        CHECK(r.passed());
        CHECK(r.rel_err <= 1e-9);
    }
    rel.direction = InverseRelationCase::Direction::g_to_f;
    for (long l : {0L, 1L}) {
        const CheckResult r = apply_inverse_relation(rel, l);
        INFO(r.note);
        CHECK(r.passed());
        CHECK(r.rel_err <= 1e-9);
    }
}

TEST_CASE("inverse relation: geometric pair from the Heine-route derivation") {
    const double a = 0.2, b = 0.3, c = 5.0, z = 0.1;  // needs |z/b| < 1
    const Base q{0.5};
    InverseRelationCase rel;
    rel.f = [=](long n, long k) { return f_entry_special(a, b, c, q, n, k); };
    rel.g = [=](long k, long l) { return g_entry_special(a, b, c, q, k, l); };
    rel.a_seq = [=](long n) { return std::pow(z, static_cast<double>(n)); };
    rel.b_seq = [=](long k) {
        const double qk = std::pow(q.q, static_cast<double>(k));
        const double A = a + b * qk;
        const double D = c - a * A;
        SeriesSpec inner;
        inner.kind = SeriesKind::q_hypergeometric;
        inner.numerator_params = {1.0 / b, z / (b * b * q.q)};
        inner.denominator_params = {z / b};
        inner.base = q.q;
        inner.argument = A * b * b * qk * q.q / D;
        return std::pow(z, static_cast<double>(k)) * qpoch_infinite(z / b, q) *
               qpoch_infinite(A * b * b * qk * q.q / D, q) /
               (qpoch_infinite(z, q) * qpoch_infinite(A * b * qk * q.q / D, q)) * eval_series(inner);
    };
    rel.direction = InverseRelationCase::Direction::g_to_f;
    const CheckResult r = apply_inverse_relation(rel, 0);
    INFO(r.note);
    CHECK(r.passed());
    CHECK(r.rel_err <= 1e-9);
}

TEST_CASE("inverse relation: identity pair is exact for any bounded sequence") {
    InverseRelationCase rel;
    rel.f = [](long n, long k) { return n == k ? 1.0 : 0.0; };
    rel.g = rel.f;
    rel.a_seq = [](long n) { return std::cos(static_cast<double>(n)); };
    rel.b_seq = rel.a_seq;
    rel.direction = InverseRelationCase::Direction::f_to_g;
    CHECK(apply_inverse_relation(rel, 3).abs_err == 0.0);
    rel.direction = InverseRelationCase::Direction::g_to_f;
    CHECK(apply_inverse_relation(rel, 5).abs_err == 0.0);
}

TEST_CASE("inverse relation flags a non-decaying tail as diverged") {
    // with |z| > b the g-direction terms grow like (z/b)^k
    const double a = 0.2, b = 0.3, c = 5.0, z = 0.35;
    const Base q{0.5};
    InverseRelationCase rel;
    rel.truncation = kDefaultPolicy.with_max_terms(300);
    rel.f = [=](long n, long k) { return f_entry_special(a, b, c, q, n, k); };
    rel.g = [=](long k, long l) { return g_entry_special(a, b, c, q, k, l); };
    rel.a_seq = [=](long n) { return std::pow(z, static_cast<double>(n)); };
    rel.b_seq = [=](long k) { return std::pow(z, static_cast<double>(k)); };  // magnitude stand-in
    rel.direction = InverseRelationCase::Direction::g_to_f;
    CHECK(apply_inverse_relation(rel, 0).status == CheckStatus::diverged);
}
