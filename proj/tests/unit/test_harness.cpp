#include <vector>

#include "doctest.h"

#include "countdown/distributions.hpp"
#include "countdown/errors.hpp"
#include "countdown/harness.hpp"
#include "countdown/process.hpp"

using namespace countdown;
using nlohmann::json;

TEST_CASE("histograms do not depend on the thread count") {
    const DrawFactory make = [] {
        return [sampler = DelaySampler(0.5, Cutoff::at(4))](Rng& rng) mutable { return heightAt(sampler(rng), 0); };
    };
    const auto one = histogram(70000, 99, 1, make);
    const auto three = histogram(70000, 99, 3, make);
    CHECK(one == three);
    std::uint64_t total = 0;
    for (auto c : one) total += c;
    CHECK(total == 70000);
}

TEST_CASE("histogram comparison on exact expectations") {
    const std::vector<double> expected{0.5, 0.3, 0.2};
    const auto rep = compareHistogram({500, 300, 200}, expected);
    CHECK(rep.pass);
    CHECK(rep.maxSigmaDev == doctest::Approx(0.0));
    const auto bad = compareHistogram({800, 100, 100}, expected);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("oracle enumeration agrees with the closed-form law") {
    const Rational x(1, 3);
    const auto oracle = oracleCorankPmf(x, 2, 1, 30);
    const auto closed = corankPmf(x, Cutoff::at(2), 1, std::nullopt, defaultTol<Rational>());
    for (long k = 0; k < std::max(oracle.size(), closed.size()); ++k) {
        CHECK(abs(oracle.at(k) - closed.at(k)) <= oracle.tailMassHi);
    }
}

TEST_CASE("experiments from json") {
    const auto spec = ExperimentSpec::fromJson(
        json{{"kind", "mc-matrix"}, {"params", {{"q", 2}, {"n", 3}, {"m", 1}, {"method", "span"}}}, {"samples", 20000}, {"seed", 5}});
    const auto rep = runExperiment(spec);
    CHECK(rep.stochastic);
    CHECK(rep.pass);
    CHECK(rep.seed == 5);

    const auto tv = runExperiment(ExperimentSpec::fromJson(
        json{{"kind", "oracle-tv"}, {"params", {{"x", "1/3"}, {"n", 3}, {"t", 1}}}, {"tol", 1e-10}}));
    CHECK(tv.pass);

    const auto mc = runExperiment(ExperimentSpec::fromJson(
        json{{"kind", "mc-corank"}, {"params", {{"x", 0.4}, {"n", "inf"}, {"t", 0}}}, {"samples", 30000}, {"seed", 12}}));
    CHECK(mc.pass);

    CHECK_THROWS(ExperimentSpec::fromJson(json{{"kind", "mc-hitting"}, {"samples", 0}}));
    CHECK_THROWS_AS(runExperiment(ExperimentSpec::fromJson(json{{"kind", "nope"}})), DomainError);
}

TEST_CASE("exact identity sweeps") {
    const std::vector<Rational> xs{Rational(1, 2)};
    for (const char* id : {"time-reversal", "death", "kiszero", "s-ratio", "s-closed-form", "log-concave"}) {
        const auto sweep = sweepIdentity(id, xs);
        CHECK_MESSAGE(sweep.failures == 0, id << ": " << sweep.firstFailure);
        CHECK(sweep.checked > 0);
    }
}

TEST_CASE("suite registry") {
    const auto& names = suiteNames();
    CHECK(names.size() == 12);
    const auto res = runSuite("technical-identity", SuiteOptions{});
    REQUIRE(res.size() == 1);
    CHECK(res[0].pass);
}
