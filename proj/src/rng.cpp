#include "countdown/rng.hpp"

#include <cmath>
#include <limits>

#include "countdown/errors.hpp"

namespace countdown {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    require(bound > 0, "Rng::below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t Rng::geometric(double r) {
    require(r >= 0.0 && r < 1.0, "Rng::geometric: ratio must be in [0,1)");
    if (r == 0.0) {
        next(); // keep stream consumption independent of the parameter
        return 0;
    }
    // Inverse CDF: P(floor(log U / log r) >= k) = P(U <= r^k) = r^k.
    const double z = std::floor(std::log(uniformOpen0()) / std::log(r));
    if (z >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
        return std::numeric_limits<std::uint64_t>::max() / 2;
    }
    return static_cast<std::uint64_t>(z);
}

} // namespace countdown
