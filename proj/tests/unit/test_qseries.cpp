#include <cmath>
#include <set>

#include "doctest.h"

#include "countdown/errors.hpp"
#include "countdown/qseries.hpp"

using namespace countdown;

namespace {

double naiveProduct(double x, long a, long b) {
    double p = 1.0;
    for (long i = a; i <= b; ++i) p *= 1.0 - std::pow(x, static_cast<double>(i));
    return p;
}

} // namespace

TEST_CASE("finite products") {
    CHECK(gFinite(Rational(1, 2), 1, 3) == Rational(21, 64));
    CHECK(gFinite(Rational(1, 3), 2, 2) == Rational(8, 9));
    CHECK(gFinite(Rational(2, 5), 4, 3) == Rational(1));
    const Tracked f = gFinite(Tracked(0.3), 1, 12);
    CHECK(std::fabs(f.value() - naiveProduct(0.3, 1, 12)) <= f.errBound() + 1e-15);
}

TEST_CASE("infinite product at x = 1/2") {
    const auto g = gInfinite(Tracked(0.5), 1, Tracked(1e-15));
    CHECK(g.value.value() == doctest::Approx(0.288788095086602).epsilon(1e-13));
    const auto exact = gInfinite(Rational(1, 2), 1, Rational(1, 1'000'000'000));
    CHECK(std::fabs(exact.value.toDouble() - 0.288788095086602) <= exact.tailBoundHi.toDouble() + 1e-15);
}

TEST_CASE("infinite product against a long naive product") {
    for (double x : {0.1, 0.37, 0.5, 0.8}) {
        for (long a : {1L, 2L, 5L}) {
            const auto g = gInfinite(Tracked(x), a, Tracked(1e-13));
            CHECK(std::fabs(g.value.value() - naiveProduct(x, a, 4000)) <= 1e-12);
        }
    }
}

TEST_CASE("tail complement plus product is one") {
    const Rational x(2, 7);
    const Rational tol(1, 1'000'000'000);
    for (long a = 1; a <= 6; ++a) {
        const auto c = tailComplement(x, a, tol);
        const auto g = gInfinite(x, a, tol);
        CHECK(abs(c.value + g.value - Rational(1)) <= c.slack + g.tailBoundHi);
    }
}

TEST_CASE("shared-cutoff tail products match per-index products") {
    const Rational x(1, 3);
    const Rational tol(1, 1'000'000'000'000);
    const EulerTail<Rational> tail(x, tol, 10);
    for (long a = 1; a <= 10; ++a) {
        CHECK(abs(tail.product(a) - gInfinite(x, a, tol).value) <= Rational(2) * tol);
        if (a > 1) CHECK(tail.product(a - 1) == tail.product(a) * (Rational(1) - power(x, a - 1)));
    }
}

TEST_CASE("Gaussian binomial counts subspaces") {
    CHECK(qBinomial(4, 2, 3) == 130);
    // Ordered bases of 2-dim subspaces of F_3^4, divided by |GL_2(F_3)| = 48.
    long independentPairs = 0;
    for (int u = 1; u < 81; ++u) {
        std::set<int> line;
        for (int c = 0; c < 3; ++c) {
            int w = 0;
            for (int d = 0, pu = u, m = 1; d < 4; ++d, pu /= 3, m *= 3) w += (c * (pu % 3) % 3) * m;
            line.insert(w);
        }
        for (int v = 0; v < 81; ++v) independentPairs += line.count(v) ? 0 : 1;
    }
    CHECK(independentPairs / 48 == 130);
    CHECK(independentPairs % 48 == 0);
}

TEST_CASE("Gaussian binomial recurrence") {
    for (long q : {2L, 3L, 4L}) {
        for (long n = 1; n <= 8; ++n) {
            CHECK(qBinomial(n, 0, q) == 1);
            CHECK(qBinomial(n, n, q) == 1);
            for (long k = 1; k < n; ++k) {
                mpz_class qk;
                mpz_ui_pow_ui(qk.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(k));
                CHECK(qBinomial(n, k, q) == qBinomial(n - 1, k - 1, q) + qk * qBinomial(n - 1, k, q));
            }
        }
    }
}

TEST_CASE("technical identity gap vanishes") {
    const Rational third(1, 3);
    const Rational half(1, 2);
    for (long n = 0; n <= 3; ++n) {
        for (long m = 0; m <= n; ++m) {
            CHECK(abs(technicalIdentityGap(third, half, m, n, 80)).toDouble() < std::ldexp(1.0, -30));
        }
    }
}

TEST_CASE("unit interval guard") {
    CHECK_THROWS_AS(requireUnitInterval(Rational(0)), DomainError);
    CHECK_THROWS_AS(requireUnitInterval(Rational(1)), DomainError);
    CHECK_THROWS_AS(requireUnitInterval(Rational(3, 2)), DomainError);
    CHECK_NOTHROW(requireUnitInterval(Rational(1, 2)));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("1e-3") == Rational(1, 1000));
    CHECK(Rational::parse("2.5E2") == Rational(250));
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
    CHECK_THROWS_AS(Rational::parse("abc"), DomainError);
}
