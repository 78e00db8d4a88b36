#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"

#include "countdown/errors.hpp"
#include "countdown/io.hpp"
#include "countdown/process.hpp"
#include "countdown/rng.hpp"

using namespace countdown;

namespace {

// Walk levels 1, 2, ... backwards from the hitting time: level i is occupied
// for z_i + 1 consecutive steps.
std::map<long, long> pathByLevels(const std::vector<long>& z, long tMin, long tMax) {
    long end = 0;
    for (long v : z) end += v;
    std::map<long, long> x;
    for (long t = end; t <= tMax; ++t) x[t] = 0;
    long t = end;
    for (long level = 1; t > tMin; ++level) {
        const long stay = (level <= static_cast<long>(z.size()) ? z[static_cast<std::size_t>(level - 1)] : 0) + 1;
        for (long s = 0; s < stay; ++s) x[--t] = level;
    }
    return x;
}

std::vector<long> randomDelays(Rng& rng) {
    std::vector<long> z(1 + rng.below(8));
    for (auto& v : z) v = static_cast<long>(rng.below(5));
    return z;
}

} // namespace

TEST_CASE("figure trajectory for z = (1,3,0,2)") {
    const std::vector<long> dense{1, 3, 0, 2};
    const auto z = DelaySequence::fromDense(dense);
    const Trajectory traj = phi(z, -6, 8);
    const std::vector<long> expected{6, 5, 4, 4, 4, 3, 2, 2, 2, 2, 1, 1, 0, 0, 0};
    CHECK(traj.tMin == -6);
    CHECK(traj.heights == expected);
    CHECK(traj.at(3) == 2);
    CHECK(traj.at(4) == 1);
    CHECK(hittingTime(z) == 6);
    CHECK(deathTime(z, 2) == 3);
    CHECK(deathTime(z, 1) == 5);
}

TEST_CASE("heights match a level-by-level walk") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dense = randomDelays(rng);
        const auto z = DelaySequence::fromDense(dense);
        const auto walk = pathByLevels(dense, -30, 30);
        for (long t = -30; t <= 30; ++t) CHECK(heightAt(z, t) == walk.at(t));
    }
}

TEST_CASE("phi inverse round trip") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dense = randomDelays(rng);
        const auto z = DelaySequence::fromDense(dense);
        const long len = static_cast<long>(dense.size());
        const Trajectory traj = phi(z, -(len + z.total() + 1), z.total() + 1);
        const auto back = phiInverse(traj);
        CHECK(back.dense(len) == dense);
        CHECK(back.total() == z.total());
    }
}

TEST_CASE("malformed trajectories are rejected") {
    CHECK_THROWS_AS(phiInverse(Trajectory{0, {0, 1, 0}}), MalformedTrajectory);
    CHECK_THROWS_AS(phiInverse(Trajectory{-2, {2, 0, 0}}), MalformedTrajectory);
}

TEST_CASE("sparse delays far out shift the path") {
    const std::vector<long> dense{1, 3, 0, 2};
    auto z = DelaySequence::fromDense(dense);
    const Trajectory base = phi(z, -6, 8);
    z.set(60, 1);
    const Trajectory shifted = phi(z, -5, 9);
    CHECK(shifted.heights == base.heights);
}

TEST_CASE("cutoff parsing") {
    CHECK(Cutoff::parse("inf").isInfinite());
    CHECK(Cutoff::parse("5").value() == 5);
    CHECK_THROWS(Cutoff::parse("-1"));
    CHECK_THROWS(Cutoff::parse("five"));
}

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a = Rng::stream(42, 3);
    Rng b = Rng::stream(42, 3);
    Rng c = Rng::stream(42, 4);
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        differs = differs || va != c.next();
    }
    CHECK(differs);
}

TEST_CASE("geometric variates have the right mean") {
    Rng rng(5);
    const double r = 0.6;
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.geometric(r));
    const double mean = r / (1 - r);
    const double sd = std::sqrt(r) / (1 - r);
    CHECK(std::fabs(sum / n - mean) < 5 * sd / std::sqrt(n));
}

TEST_CASE("sampled hitting time has the right mean") {
    const double x = 0.5;
    double expected = 0.0;
    double variance = 0.0;
    for (int i = 1; i < 200; ++i) {
        const double p = std::pow(x, i);
        expected += p / (1 - p);
        variance += p / ((1 - p) * (1 - p));
    }
    const int n = 40000;
    Rng rng(9);
    DelaySampler sampler(x, Cutoff::infinite());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(hittingTime(sampler(rng)));
    CHECK(std::fabs(sum / n - expected) < 5 * std::sqrt(variance / n));

    double chainSum = 0.0;
    double chainExpected = 0.0;
    double chainVar = 0.0;
    for (int i = 1; i <= 6; ++i) {
        const double p = std::pow(x, i);
        chainExpected += p / (1 - p);
        chainVar += p / ((1 - p) * (1 - p));
    }
    for (int i = 0; i < n; ++i) chainSum += static_cast<double>(chainHittingTime(6, x, rng));
    CHECK(std::fabs(chainSum / n - chainExpected) < 5 * std::sqrt(chainVar / n));
}

TEST_CASE("trajectory serialization") {
    const std::vector<long> dense{1, 3, 0, 2};
    const Trajectory traj = phi(DelaySequence::fromDense(dense), -1, 1);
    const auto j = io::trajectoryJson(traj);
    CHECK(j.at("tMin") == -1);
    CHECK(j.at("points").size() == 3);
    CHECK(j.at("points")[0][1] == 3);
    CHECK(io::trajectoryCsv(traj) == "t,x\n-1,3\n0,2\n1,2\n");
}
