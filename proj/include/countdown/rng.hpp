#pragma once

#include <cstdint>
#include <random>

namespace countdown {

/// Seedable generator with platform-independent draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the distributions are implemented here rather than taken from
/// <random> because those are implementation-defined.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64";

    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Independent stream `index` derived from a base seed (splitmix64 mix).
    static Rng stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1].
    double uniformOpen0() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
    /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform01() < p; }
    /// Z >= 0 with P(Z >= k) = r^k, for 0 <= r < 1.
    std::uint64_t geometric(double r);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace countdown
