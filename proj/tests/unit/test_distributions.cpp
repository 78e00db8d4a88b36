#include <cmath>
#include <vector>

#include "doctest.h"

#include "countdown/distributions.hpp"
#include "countdown/errors.hpp"
#include "countdown/qseries.hpp"

using namespace countdown;

namespace {

const Rational kTol(1, 1'000'000'000'000);

} // namespace

TEST_CASE("corank law matches hand-counted 2x2 and 2x3 matrices over F_2") {
    // 2x2: ranks 0,1,2 occur 1, 9, 6 times out of 16.
    const auto square = corankPmf(Rational(1, 2), Cutoff::at(2), 0, std::nullopt, kTol);
    CHECK(square.at(0) == Rational(6, 16));
    CHECK(square.at(1) == Rational(9, 16));
    CHECK(square.at(2) == Rational(1, 16));
    CHECK(square.tailMassHi == Rational(0));
    // 2x3: rank 2 needs (8-1)(8-2) = 42 of 64; rank 0 only the zero matrix.
    const auto wide = corankPmf(Rational(1, 2), Cutoff::at(2), 1, std::nullopt, kTol);
    CHECK(wide.at(0) == Rational(42, 64));
    CHECK(wide.at(1) == Rational(21, 64));
    CHECK(wide.at(2) == Rational(1, 64));
}

TEST_CASE("corank law by brute force over the delays") {
    // X^{(2)}_0 with z_1, z_2 geometric: enumerate a large box of delays.
    const double x = 0.4;
    std::vector<double> law(3, 0.0);
    for (int z1 = 0; z1 < 80; ++z1) {
        for (int z2 = 0; z2 < 80; ++z2) {
            const double w = (1 - x) * std::pow(x, z1) * (1 - x * x) * std::pow(x * x, z2);
            const int height = (z1 + z2 - 1 >= 0 ? 1 : 0) + (z2 - 2 >= 0 ? 1 : 0);
            law[static_cast<std::size_t>(height)] += w;
        }
    }
    const auto pmf = corankPmf(Rational(2, 5), Cutoff::at(2), 0, std::nullopt, kTol);
    for (long k = 0; k < 3; ++k) CHECK(pmf.at(k).toDouble() == doctest::Approx(law[static_cast<std::size_t>(k)]).epsilon(1e-12));
}

TEST_CASE("finite corank laws sum to one exactly") {
    for (long n = 1; n <= 6; ++n) {
        for (long t = -n; t <= 4; ++t) {
            CHECK(corankPmf(Rational(1, 3), Cutoff::at(n), t, std::nullopt, kTol).sum() == Rational(1));
        }
    }
}

TEST_CASE("hitting time law at x = 1/2") {
    const auto pmf = hittingTimePmf(Rational(1, 2), Cutoff::infinite(), 5L, kTol);
    const double g = 0.288788095086602;
    CHECK(pmf.at(0).toDouble() == doctest::Approx(g).epsilon(1e-11));
    CHECK(pmf.at(1).toDouble() == doctest::Approx(g).epsilon(1e-11));
    const auto finite = hittingTimePmf(Rational(1, 2), Cutoff::at(1), 4L, kTol);
    for (long k = 0; k <= 4; ++k) CHECK(finite.at(k) == power(Rational(1, 2), k + 1));
}

TEST_CASE("float and exact backends agree within the float error bound") {
    const auto exact = corankPmf(Rational(3, 10), Cutoff::infinite(), 1, std::nullopt, kTol);
    const auto approx = corankPmf(Tracked(0.3), Cutoff::infinite(), 1, std::nullopt, Tracked(1e-12));
    const long len = std::min(exact.size(), approx.size());
    REQUIRE(len > 3);
    for (long k = 0; k < len; ++k) {
        CHECK(std::fabs(exact.at(k).toDouble() - approx.at(k).value()) <=
              approx.at(k).errBound() + approx.probErr.upper() + exact.probErr.toDouble() + 1e-15);
    }
}

TEST_CASE("remainder law has mass one") {
    const auto pmf = remainderPmf(Rational(1, 2), 3, std::nullopt, kTol);
    CHECK(abs(pmf.sum() - Rational(1)) <= pmf.tailMassHi + pmf.probErr);
}

TEST_CASE("mode of S") {
    const auto tie = modeOfS(Rational(1, 2), kTol);
    CHECK(tie.mode == 0);
    CHECK(tie.tieWithNext);
    CHECK(modeOfS(Tracked(0.55), Tracked(1e-12)).mode == 1);
    const auto low = modeOfS(Tracked(0.3), Tracked(1e-12));
    CHECK(low.mode == 0);
    CHECK_FALSE(low.tieWithNext);
}

TEST_CASE("critical points") {
    CHECK(criticalX(0).x == doctest::Approx(0.5).epsilon(1e-15));
    const auto golden = criticalX(1);
    CHECK(std::fabs(golden.x - (std::sqrt(5.0) - 1) / 2) < 1e-14);
    CHECK(std::fabs(golden.residual) < 1e-14);
    for (long k : {2L, 10L, 500L}) {
        const auto c = criticalX(k);
        CHECK(std::fabs(std::pow(c.x, static_cast<double>(k + 1)) + c.x - 1) < 1e-13);
        CHECK(c.y == doctest::Approx(-1 / std::log(c.x)));
    }
}

TEST_CASE("death probabilities") {
    const Rational x(1, 3);
    CHECK(deathProb(x, Cutoff::at(3), -4, 1, kTol) == Rational(0));
    CHECK(deathProb(x, Cutoff::at(2), 0, 4, kTol) == Rational(0));
}

TEST_CASE("remainder tail bounds") {
    for (long n = 1; n <= 5; ++n) {
        const auto c = rnTailBoundCheck(Rational(1, 2), n, kTol);
        CHECK(c.proofHolds);
        CHECK(c.statedHolds);
        CHECK(c.proofBound <= c.statedBound);
    }
}

TEST_CASE("log-concavity detector") {
    const std::vector<Rational> good{Rational(1, 4), Rational(1, 2), Rational(1, 4)};
    const std::vector<Rational> gap{Rational(1, 2), Rational(0), Rational(1, 2)};
    const std::vector<Rational> dip{Rational(1, 2), Rational(1, 10), Rational(2, 5)};
    CHECK(isLogConcave<Rational>(good));
    CHECK_FALSE(isLogConcave<Rational>(gap));
    CHECK_FALSE(isLogConcave<Rational>(dip));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(corankPmf(Rational(3, 2), Cutoff::at(2), 0, std::nullopt, kTol), DomainError);
    CHECK_THROWS_AS(hittingTimePmf(Rational(0), Cutoff::at(2), std::nullopt, kTol), DomainError);
}
