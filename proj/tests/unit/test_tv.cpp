#include <cmath>
#include <vector>

#include "doctest.h"

#include "countdown/errors.hpp"
#include "countdown/tv.hpp"

using namespace countdown;

namespace {

const Rational kTol(1, 1'000'000'000'000);

Pmf<Tracked> poisson(double lambda, long len) {
    Pmf<Tracked> p;
    double term = std::exp(-lambda);
    for (long k = 0; k < len; ++k) {
        p.probs.emplace_back(term);
        term *= lambda / static_cast<double>(k + 1);
    }
    p.tailMassHi = Tracked(1e-30);
    return p;
}

} // namespace

TEST_CASE("distance between small pmfs") {
    Pmf<Rational> p;
    p.probs = {Rational(1, 2), Rational(1, 2)};
    Pmf<Rational> r;
    r.probs = {Rational(1, 4), Rational(3, 4)};
    const auto d = tvFromPmfs(p, r);
    CHECK(d.value == Rational(1, 4));
    CHECK(d.slack == Rational(0));
}

TEST_CASE("process and corank distances at x = 1/2, n = 1") {
    const double g = 0.288788095086602;
    const auto process = tvProcess(Rational(1, 2), 1, kTol);
    REQUIRE(process.exact);
    CHECK(process.exact->value.toDouble() == doctest::Approx(1 - 2 * g).epsilon(1e-11));
    const auto corank = tvCorank(Rational(1, 2), 1, 0, kTol);
    REQUIRE(corank.exact);
    CHECK(corank.exact->value.toDouble() == doctest::Approx((1 - 2 * g) / 2).epsilon(1e-11));
    REQUIRE(corank.directSum);
    CHECK(abs(corank.exact->value - corank.directSum->value) <= corank.exact->slack + corank.directSum->slack);
}

TEST_CASE("closed forms are withheld above one half") {
    const auto r = tvCorank(Tracked(0.7), 3, 0, Tracked(1e-12));
    CHECK_FALSE(r.closedForm);
    CHECK_FALSE(r.exact);
    REQUIRE(r.directSum);
    CHECK(r.directSum->value.value() > 0);
}

TEST_CASE("elementary sandwich") {
    // Lower constant 1/2 needs prod_{i>t}(1-x^i) >= 1/2; at t = 0, x = 1/2 the
    // product is about 0.289, so the lower bound fails there.
    const auto t0 = tvCorank(Rational(1, 2), 8, 0, kTol);
    CHECK(t0.exact->value + t0.exact->slack < t0.elementaryLower->value);
    CHECK(t0.exact->value + t0.exact->slack <= t0.elementaryUpper->value);
    const auto t1 = tvCorank(Rational(1, 2), 8, 1, kTol);
    CHECK(t1.elementaryLower->value <= t1.exact->value - t1.exact->slack);
    CHECK(t1.exact->value + t1.exact->slack <= t1.elementaryUpper->value);
}

TEST_CASE("unimodal shift of Poisson(4)") {
    const auto p = poisson(4.0, 80);
    const auto d = tvUnimodalShift(p);
    const double peak = std::exp(-4.0) * 256.0 / 24.0;
    CHECK(d.value.value() == doctest::Approx(0.195367).epsilon(1e-5));
    CHECK(std::fabs(d.value.value() - peak) <= d.slack.upper() + d.value.errBound());
    const auto b = tvBernoulliShift(p, Tracked(0.3));
    CHECK(b.value.value() == doctest::Approx(0.3 * peak).epsilon(1e-9));
}

TEST_CASE("non-unimodal input is rejected") {
    Pmf<Rational> p;
    p.probs = {Rational(2, 5), Rational(1, 10), Rational(1, 2)};
    CHECK_THROWS_AS(tvUnimodalShift(p), NotUnimodal);
}

TEST_CASE("comparison row with the q^-(m+n+1) bounds") {
    const FgRow row = fgComparison(2, 4, 0, kTol);
    CHECK(row.ok());
    CHECK(row.fgLower < row.exact);
    CHECK(row.exact < row.newUpper);
    CHECK(row.newUpper < row.fgUpper);
    CHECK(row.newUpper == Rational(1, 16));
}

TEST_CASE("non-positive time lower bound") {
    const auto c = tvLowerNonpositiveT(Rational(1, 3), 4, -2, kTol);
    CHECK(c.holds);
    CHECK_THROWS_AS(tvLowerNonpositiveT(Rational(1, 3), 1, -2, kTol), DomainError);
}

TEST_CASE("hitting-time closed form against direct summation") {
    for (long n = 1; n <= 5; ++n) {
        const auto r = tvHitting(Rational(1, 3), n, kTol);
        REQUIRE(r.exact);
        REQUIRE(r.directSum);
        CHECK(abs(r.exact->value - r.directSum->value) <= r.exact->slack + r.directSum->slack);
    }
}
